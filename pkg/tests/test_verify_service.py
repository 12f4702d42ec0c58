"""
Acceptance suites run through VerifyService.
"""

import pytest

from codes.errors import BadParameters
from services.verify_service import SUITES, SuiteResult, VerifyService


@pytest.fixture
def verify_service(test_settings):
    return VerifyService(test_settings)


@pytest.mark.services
class TestFamilySuites:
    """Gram patterns and hull bounds of the explicit families"""

    @pytest.mark.parametrize("q", [3, 4])
    def test_full_field_suite(self, verify_service, q):
        """Every check of the full-field suite passes."""
        result = verify_service.run("lemma-q22", q)
        assert result.passed, result.as_dict()
        names = {check.name for check in result.checks}
        assert {"gram-pattern", "hull-dim", "gram-folding", "block-multiplicity"} <= names

    def test_coset_h_suite(self, verify_service):
        """q = 5, h = 3 has n among the admissible support sizes."""
        result = verify_service.run("lemma-h1", 5, h=3)
        assert result.passed, result.as_dict()

    def test_coset_2h_suite(self, verify_service):
        """The index-2h family is reported infeasible, which is the expected outcome."""
        result = verify_service.run("lemma-2h1", 9, h=2)
        assert result.passed, result.as_dict()
        assert any(c.name == "construction-infeasible" and c.passed for c in result.checks)

    def test_self_orthogonal_extension(self, verify_service):
        """The [q²+1, q] extension is self-orthogonal for q = 5."""
        assert verify_service.run("theorem-grs1", 5).passed


@pytest.mark.services
class TestRuleTrials:
    """Randomized exact-prediction trials"""

    @pytest.mark.parametrize("suite", ["prop-grs1", "prop-3", "prop-4"])
    def test_predictions_match_direct_hulls(self, verify_service, suite):
        """Predicted hulls equal the directly computed ones over GF(16)."""
        result = verify_service.run(suite, 4, trials=20)
        assert result.passed, result.as_dict()

    @pytest.mark.slow
    @pytest.mark.parametrize("q", [3, 4])
    @pytest.mark.parametrize("suite", ["prop-grs1", "prop-3", "prop-4"])
    def test_two_hundred_trials(self, verify_service, suite, q):
        """200 trials each over GF(9) and GF(16) without a single mismatch."""
        result = verify_service.run(suite, q, trials=200)
        assert result.passed, result.as_dict()
        summary = next(c for c in result.checks if c.name == "exact-predictions")
        assert summary.detail.startswith("200 trials")

    def test_trials_are_seeded(self, test_settings_with_overrides):
        """The same seed gives the same case histogram."""
        first = VerifyService(test_settings_with_overrides(search_seed=7)).run("prop-3", 3, trials=15)
        second = VerifyService(test_settings_with_overrides(search_seed=7)).run("prop-3", 3, trials=15)
        assert first.as_dict() == second.as_dict()


@pytest.mark.services
@pytest.mark.golden
class TestTablesSuite:
    """Golden comparison through the verify suite"""

    def test_tables(self, verify_service):
        """The q = 11, h = 3 table reproduces."""
        assert verify_service.run("tables", 11, h=3, family="2").passed

    def test_tables_need_a_golden_file(self, verify_service):
        """Unpublished configurations are refused."""
        with pytest.raises(BadParameters):
            verify_service.run("tables", 5, family="1")
        with pytest.raises(BadParameters):
            verify_service.run("tables", 8)


@pytest.mark.unit
class TestSuiteResult:
    """Result bookkeeping"""

    def test_failures_carry_counterexamples(self):
        """A failed check keeps its counterexample in the JSON form."""
        result = SuiteResult("prop-3")
        result.add("trial 0", True)
        result.add("trial 1", False, "mismatch", {"n": 5})
        assert not result.passed
        assert result.as_dict()["checks"][1]["counterexample"] == {"n": 5}
        assert "counterexample" not in result.as_dict()["checks"][0]

    def test_unknown_suite(self, verify_service):
        """Suite names are checked."""
        assert "tables" in SUITES
        with pytest.raises(BadParameters):
            verify_service.run("lemma-x", 4)
