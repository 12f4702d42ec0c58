"""
Witness service for certifying enumerated EAQECC parameters by actual construction
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

from codes import rules
from codes.eaqecc import EnumeratedTuple, Source, enumeration_family, hermitian_construction
from codes.errors import BadParameters, NoAllNonzeroSolution, PreconditionError
from codes.families import SearchParams, build_family_code
from codes.grs import Code
from dependencies.config import Settings

logger = logging.getLogger(__name__)

# shape -> chain kind; odd shapes use the second form of the construction
CHAIN_KINDS = {1: "dim", 2: "dim", 3: "length", 4: "length", 5: "both", 6: "both"}


@dataclass
class WitnessReport:
    """Which enumerated tuples an explicit code reproduced"""

    witnessed: set = field(default_factory=set)
    unwitnessable: set = field(default_factory=set)
    failed: set = field(default_factory=set)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "witnessed": len(self.witnessed),
            "unwitnessable": len(self.unwitnessable),
            "failed": sorted(self.failed),
            "notes": self.notes,
        }


class WitnessService:
    """Service for end-to-end witness operations"""

    def __init__(self, settings: Settings):
        self.settings = settings

    @property
    def search_params(self) -> SearchParams:
        return SearchParams(
            seed=self.settings.search_seed,
            samples=self.settings.kernel_search_samples,
            batch=self.settings.kernel_search_batch,
        )

    def chain(self, code: Code, kind: str, steps: int, q: int) -> Code:
        """Apply ``steps`` rule applications of one kind, ∞ step last when the length reaches q²+1"""
        for step in range(steps):
            last = step == steps - 1
            use_infty = last and code.length + 1 == q * q + 1
            if kind == "dim":
                code = rules.increase_dim(code, "up").code
            elif kind == "length":
                rule = rules.extend_length_infty if use_infty else rules.extend_length_zero
                code = rule(code, 1).code
            elif kind == "both":
                code = rules.extend_both(code, 1, "infty" if use_infty else "zero").code
            else:
                raise BadParameters(f"unknown chain kind {kind!r}")
        return code

    def _reduced_tuples(self, code: Code, low: int) -> set:
        """Tuple keys of the code and of every hull reduction down to ``low``"""
        keys = set()
        for params in hermitian_construction(code):
            keys.add(params.key)
        for step in rules.iter_hull_reduction(code, low):
            for params in hermitian_construction(step.code):
                keys.add(params.key)
        return keys

    def witness(self, tuples: list[EnumeratedTuple], q: int, family, h: Optional[int] = None) -> WitnessReport:
        """Reproduce every tuple with a nonnegative-i source from an explicit code"""
        if q > self.settings.witness_max_q:
            raise BadParameters(f"witness runs are limited to q ≤ {self.settings.witness_max_q}")
        spec = enumeration_family(q, family, h)
        report = WitnessReport()
        formula_only = False

        groups: dict[tuple[str, int, int], list[tuple[Source, tuple]]] = {}
        for t in tuples:
            if not t.witnessable:
                report.unwitnessable.add(t.params.key)
                continue
            for src in t.sources:
                if not src.witnessable:
                    continue
                kind = CHAIN_KINDS[src.shape]
                N = spec.n if kind == "dim" else spec.n + src.i
                K = src.k if kind == "length" else src.k + src.i
                groups.setdefault((kind, N, K), []).append((src, t.params.key))

        for (kind, N, K), members in sorted(groups.items()):
            pending = {key for _, key in members} - report.witnessed
            if not pending:
                continue
            # start from the source with the largest guaranteed hull after the chain
            candidates = sorted({(src.l - src.i, src.k, src.i) for src, _ in members}, reverse=True)
            for _, k, i in candidates:
                try:
                    base = build_family_code(spec, k, self.search_params).code
                    code = self.chain(base, kind, i, q)
                    report.witnessed |= pending & self._reduced_tuples(code, 0)
                except NoAllNonzeroSolution as exc:
                    report.notes.append(f"{spec.label}: formula-only ({exc})")
                    formula_only = True
                    break
                except PreconditionError as exc:
                    logger.warning("witness chain %s N=%d K=%d from k=%d failed: %s", kind, N, K, k, exc)
                    continue
                pending -= report.witnessed
                if not pending:
                    break
                logger.debug("witness %s N=%d K=%d: %d tuples left after k=%d", kind, N, K, len(pending), k)
            if formula_only:
                break

        for t in tuples:
            key = t.params.key
            if key not in report.witnessed and key not in report.unwitnessable:
                report.failed.add(key)
        if formula_only:
            # no explicit multipliers exist for this evaluation set
            report.unwitnessable |= report.failed
            report.failed = set()
        report.notes = sorted(set(report.notes))
        logger.info(
            "Witnessed %d tuples for %s (%d unwitnessable, %d failed)",
            len(report.witnessed),
            spec.label,
            len(report.unwitnessable),
            len(report.failed),
        )
        return report
