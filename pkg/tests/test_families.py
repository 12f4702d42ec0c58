"""
Explicit families: evaluation sets, multiplier solver, Gram patterns and the
piecewise hull bound.
"""

import numpy as np
import pytest

from codes.errors import BadParameters, NoAllNonzeroSolution, OutOfRange
from codes.families import (
    FamilySpec,
    build_coset_2h,
    build_coset_h,
    build_family_code,
    build_full_field,
    constraint_pairs,
    evaluation_points,
    exceptional_support_sizes,
    full_field_census_formula,
    gram_census,
    hull_lb_formula,
    predicted_census,
    solve_selforth_multipliers,
)
from codes.field import make_tower
from codes.grs import gram, hull_dim


@pytest.mark.unit
class TestFamilySpec:
    """Parameters, lengths and validation."""

    def test_aliases(self):
        """CLI names and table numbers resolve to one family."""
        assert FamilySpec("full-field", 4).family == "full_field"
        assert FamilySpec("1", 4).family == "full_field"
        assert FamilySpec("2", 5, 3).family == "coset_h"
        assert FamilySpec("coset-2h", 9, 2).family == "coset_2h"

    @pytest.mark.parametrize(
        "family,q,h,n",
        [
            ("full_field", 4, None, 16),
            ("full_field", 8, None, 64),
            ("coset_h", 5, 3, 16),
            ("coset_h", 8, 3, 42),
            ("coset_h", 11, 3, 80),
            ("coset_2h", 5, 2, 18),
            ("coset_2h", 9, 2, 60),
        ],
    )
    def test_lengths(self, family, q, h, n):
        """n follows the number of cosets taken."""
        assert FamilySpec(family, q, h).n == n

    def test_invalid_parameters(self):
        """h must divide q+1 and the index-2h family needs odd q."""
        with pytest.raises(BadParameters):
            FamilySpec("coset-h", 4, 4)
        with pytest.raises(BadParameters):
            FamilySpec("coset_2h", 8, 3)
        with pytest.raises(BadParameters):
            FamilySpec("full_field", 6)
        with pytest.raises(BadParameters):
            FamilySpec("hermitian", 4)

    def test_t_bounds(self):
        """The index-2h family defaults to the floor bound."""
        spec = FamilySpec("coset_2h", 9, 2)
        assert spec.t_max() == 3
        assert spec.t_max("ceil") == 4
        assert FamilySpec("full_field", 4).t_max() == 2

    def test_evaluation_points_are_distinct(self):
        """Coset points are distinct and nonzero."""
        family = FamilySpec("coset_h", 5, 3)
        points = evaluation_points(family, make_tower(5))
        assert len(points) == len(set(points)) == family.n
        assert 0 not in points


@pytest.mark.unit
class TestMultiplierSolver:
    """All-nonzero multipliers in GF(q)*."""

    def test_full_field_multipliers_are_constant(self, gf9):
        """The full-field kernel is spanned by the all-ones vector."""
        u = solve_selforth_multipliers(gf9, range(9), constraint_pairs(3, ((2, 2),)))
        assert np.all(u == 1)

    def test_solution_satisfies_constraints(self):
        """Every constrained power sum vanishes and u lies in GF(q)*."""
        spec = make_tower(5)
        family = FamilySpec("coset_h", 5, 3)
        a = spec.GF(list(evaluation_points(family, spec)))
        constraints = constraint_pairs(5, family.exceptional_pairs)
        u = solve_selforth_multipliers(spec, a, constraints)
        assert np.all(u != 0) and np.all(u**5 == u)
        for i, j in constraints:
            assert np.sum(u * a ** (i + 5 * j)) == 0

    def test_overconstrained_system(self, gf9):
        """Too many constraints on too few points leave only zero."""
        with pytest.raises(NoAllNonzeroSolution):
            solve_selforth_multipliers(gf9, (1, 2), [(0, 0), (1, 0), (0, 1)])


@pytest.mark.unit
class TestFamilyCodes:
    """Gram patterns of the constructed families."""

    @pytest.mark.parametrize("q", [3, 4, 5, 7, 8])
    def test_full_field_pattern(self, q):
        """Zero Gram except the (q−1, q−1) entry, hull q−1."""
        code = build_full_field(q)
        M = gram(code)
        assert M[q - 1, q - 1] != 0
        assert int(np.count_nonzero(M.view(np.ndarray))) == 1
        assert hull_dim(code).hull_dim == q - 1

    @pytest.mark.parametrize("q,h", [(5, 3), (8, 3)])
    def test_coset_h_pattern(self, q, h):
        """Only the two exceptional entries survive."""
        family = FamilySpec("coset_h", q, h)
        code = build_coset_h(q, h)
        census = set(gram_census(code))
        assert census == set(family.exceptional_pairs)

    @pytest.mark.parametrize("q,h", [(5, 2), (9, 2)])
    def test_coset_2h_is_infeasible(self, q, h):
        """The index-2h evaluation set admits no all-nonzero multipliers."""
        with pytest.raises(NoAllNonzeroSolution, match="exclude"):
            build_coset_2h(q, h)

    def test_support_sizes(self):
        """Admissible multiplier supports include n for coset_h and exclude it for coset_2h."""
        coset_h = FamilySpec("coset_h", 5, 3)
        assert exceptional_support_sizes(5, coset_h.exceptional_pairs) == frozenset({24, 16})
        coset_2h = FamilySpec("coset_2h", 9, 2)
        assert exceptional_support_sizes(9, coset_2h.exceptional_pairs) == frozenset({80, 40})
        assert exceptional_support_sizes(4, ((3, 3),)) is None


@pytest.mark.unit
class TestHullBound:
    """Piecewise bound against computed hulls."""

    def test_full_field_values(self):
        """The q = 4 bound for k = 1..8."""
        family = FamilySpec("full_field", 4)
        assert [hull_lb_formula(family, k).l for k in range(1, 9)] == [1, 2, 3, 3, 4, 5, 5, 4]

    def test_out_of_range(self):
        """k must lie in [1, n/2]."""
        family = FamilySpec("full_field", 4)
        with pytest.raises(OutOfRange):
            hull_lb_formula(family, 0)
        with pytest.raises(OutOfRange):
            hull_lb_formula(family, 9)

    @pytest.mark.parametrize("q", [4, 5])
    def test_full_field_sweep(self, q):
        """Computed hull meets the bound and the census matches the prediction and λ_k."""
        family = FamilySpec("full_field", q)
        for k in range(1, q * q // 2 + 1):
            outcome = build_family_code(family, k)
            assert outcome.hull_dim >= outcome.predicted_hull_lb
            census = gram_census(outcome.code)
            assert set(census) == set(predicted_census(family, k))
            assert len(census) == full_field_census_formula(q, k)

    @pytest.mark.slow
    @pytest.mark.parametrize("q,h", [(5, 3), (8, 3)])
    def test_coset_h_sweep(self, q, h):
        """Computed hull meets the bound for every k ≤ n/2 in a branch."""
        family = FamilySpec("coset_h", q, h)
        checked = 0
        for k in range(1, family.n // 2 + 1):
            try:
                outcome = build_family_code(family, k)
            except OutOfRange:
                continue
            assert outcome.hull_dim >= outcome.predicted_hull_lb
            assert set(gram_census(outcome.code)) == set(predicted_census(family, k))
            checked += 1
        assert checked > 0

    def test_outcome_record(self):
        """Family outcomes carry the branch and t."""
        outcome = build_family_code(FamilySpec("full_field", 4), 5)
        assert outcome.rule_tag == "family:full_field"
        assert outcome.cases == ("t=2", "B1")
        assert outcome.record["hull_dim"] == 4
