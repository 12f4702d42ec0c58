"""
Code service for handling code construction, descriptors and rule application
"""
import json
import logging
from pathlib import Path
from typing import Optional

from codes import rules
from codes.errors import BadParameters
from codes.families import FamilySpec, SearchParams, build_family_code, gram_census
from codes.grs import EUCLIDEAN, HERMITIAN, Code, code_from_descriptor, hull_dim, min_distance
from codes.rules import RuleOutcome
from dependencies.config import Settings

logger = logging.getLogger(__name__)

RULES = ("extend-length", "extend-zero", "extend-length-both", "increase-dim", "extend-both", "reduce")


class CodeService:
    """Service for code construction and propagation-rule operations"""

    def __init__(self, settings: Settings):
        self.settings = settings

    @property
    def search_params(self) -> SearchParams:
        return SearchParams(
            seed=self.settings.search_seed,
            samples=self.settings.kernel_search_samples,
            batch=self.settings.kernel_search_batch,
        )

    def build(self, family: str, q: int, k: int, h: Optional[int] = None, t_bound: Optional[str] = None) -> RuleOutcome:
        """Build the k-dimensional code of a family, checked against its hull bound"""
        spec = FamilySpec(family, q, h)
        outcome = build_family_code(spec, k, self.search_params, t_bound)
        logger.info("Built %s k=%d: hull %d (bound %d)", spec.label, k, outcome.hull_dim, outcome.predicted_hull_lb)
        return outcome

    def certificate(self, code: Code):
        return min_distance(
            code,
            "auto",
            max_minors=self.settings.max_minors,
            max_exhaustive=self.settings.max_exhaustive,
        )

    def summary(self, code: Code) -> dict:
        """n, k, hull dimensions and the distance certificate tier"""
        cert = self.certificate(code)
        return {
            "n": code.length,
            "k": code.k,
            "hull_euclidean": hull_dim(code, EUCLIDEAN).hull_dim,
            "hull_hermitian": hull_dim(code, HERMITIAN).hull_dim,
            "distance": cert.d,
            "mds": cert.is_mds,
            "certificate": cert.mode,
        }

    def census(self, code: Code) -> list[list[int]]:
        return [list(pos) for pos in gram_census(code)]

    def apply_rule(
        self,
        code: Code,
        rule: str,
        lam: Optional[int] = None,
        lam_infty: Optional[int] = None,
        target_hull: Optional[int] = None,
        direction: str = "up",
        at: str = "infty",
    ) -> RuleOutcome:
        """Apply one propagation rule and return its checked outcome"""
        if rule == "extend-length":
            return rules.extend_length_infty(code, 1 if lam is None else lam)
        if rule == "extend-zero":
            return rules.extend_length_zero(code, 1 if lam is None else lam)
        if rule == "extend-length-both":
            return rules.extend_length_both(
                code, 1 if lam is None else lam, 1 if lam_infty is None else lam_infty
            )
        if rule == "increase-dim":
            return rules.increase_dim(code, direction)
        if rule == "extend-both":
            return rules.extend_both(code, lam, at)
        if rule == "reduce":
            if target_hull is None:
                raise BadParameters("reduce needs --target-hull")
            source = hull_dim(code).hull_dim
            reduced = rules.hull_reduce(code, target_hull)
            return RuleOutcome(
                code=reduced.code,
                predicted_hull_lb=target_hull,
                computed_hull=reduced.hull,
                rule_tag="hull-reduce",
                source_hull=source,
                cases=tuple(f"scale({pos},theta^{t})" for pos, t in reduced.steps),
                exact_hull=target_hull,
            )
        raise BadParameters(f"unknown rule {rule!r}; expected one of {', '.join(RULES)}")

    def outcome_document(self, outcome: RuleOutcome) -> dict:
        return {
            "code": outcome.code.descriptor,
            "provenance": list(outcome.code.provenance),
            "outcome": {k: v for k, v in outcome.record.items() if k not in outcome.code.descriptor},
        }

    @staticmethod
    def save(document: dict, path: str) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(document, sort_keys=True, indent=2) + "\n", encoding="utf-8")
        return target

    @staticmethod
    def load(path: str) -> Code:
        """Read a descriptor file written by ``save`` or a bare code descriptor"""
        document = json.loads(Path(path).read_text(encoding="utf-8"))
        descriptor = {**document.get("code", document), "provenance": document.get("provenance", [])}
        return code_from_descriptor(descriptor)
