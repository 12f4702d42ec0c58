"""Entanglement-assisted quantum code parameters derived from Hermitian hulls.

A code [n, k, d] over GF(q²) with l-dimensional Hermitian hull gives the two
parameter sets

    [[n, k−l, d; n−k−l]]        (first form)
    [[n, n−k−l, d^{⊥H}; k−l]]   (second form)

Every ``EaqeccParams`` checks the three Singleton-type bounds on construction.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple

from .errors import (
    BadFamilyParams,
    BadParameters,
    BoundViolation,
    ModeInfeasible,
    OutOfRange,
    PredictionMismatch,
    RangeViolation,
    UnknownDistance,
)
from .families import FamilySpec, TBound, hull_lb_formula
from .grs import Code, GrsCode, hermitian_dual, hull_dim, min_distance

logger = logging.getLogger(__name__)

MDS_BY_EQ1 = "mds_by_eq1"
MDS_BY_EQ3 = "mds_by_eq3"
NOT_MDS = "not_mds"


@dataclass(frozen=True)
class EaqeccParams:
    """[[n, k_logical, d; c]]_q with its MDS verdict."""

    q: int
    n: int
    k_logical: int
    d: int
    c: int
    provenance: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.k_logical < 0 or not 0 <= self.c <= self.n or self.d < 1:
            raise BoundViolation(f"{self} has out-of-range parameters")
        if self.k_logical > self.entanglement_bound:
            raise BoundViolation(f"{self} violates k ≤ c + max(0, n−2d+2) = {self.entanglement_bound}")
        if self.k_logical > self.length_bound:
            raise BoundViolation(f"{self} violates k ≤ n−d+1 = {self.length_bound}")
        high = self.high_distance_bound
        if high is not None and self.k_logical > high:
            raise BoundViolation(f"{self} violates the 2d ≥ n+2 bound {high}")

    def __str__(self) -> str:
        return f"[[{self.n},{self.k_logical},{self.d};{self.c}]]_{self.q}"

    @property
    def key(self) -> tuple[int, int, int, int]:
        return self.n, self.k_logical, self.d, self.c

    @property
    def entanglement_bound(self) -> int:
        return self.c + max(0, self.n - 2 * self.d + 2)

    @property
    def length_bound(self) -> int:
        return self.n - self.d + 1

    @property
    def high_distance_bound(self) -> Fraction | None:
        n, d = self.n, self.d
        if 2 * d < n + 2:
            return None
        return Fraction((n - d + 1) * (self.c + 2 * d - 2 - n), 3 * d - 3 - n)

    @property
    def mds(self) -> str:
        if 2 * self.d <= self.n + 2 and self.k_logical == self.entanglement_bound:
            return MDS_BY_EQ1
        if 2 * self.d >= self.n + 2 and self.k_logical == self.high_distance_bound:
            return MDS_BY_EQ3
        return NOT_MDS

    @property
    def is_mds(self) -> bool:
        return self.mds != NOT_MDS

    @property
    def degenerate(self) -> bool:
        return self.k_logical == 0


def construction_params(
    q: int, n: int, k: int, hull: int, d: int, d_dual: int, provenance: tuple[str, ...] = ()
) -> tuple[EaqeccParams, EaqeccParams]:
    """Both parameter sets of the Hermitian construction for an [n, k, d] code with the given hull."""
    if not 0 <= hull <= min(k, n - k):
        raise BadParameters(f"hull {hull} impossible for an [{n},{k}] code")
    forms = (
        (k - hull, d, n - k - hull, "first-form"),
        (n - k - hull, d_dual, k - hull, "second-form"),
    )
    out = []
    for k_logical, dist, c, tag in forms:
        # kept, but tagged: zero logical qudits
        tags = (tag, "degenerate") if k_logical == 0 else (tag,)
        out.append(EaqeccParams(q, n, k_logical, dist, c, provenance + tags))
    first, second = out
    return first, second


def hermitian_construction(code: Code) -> tuple[EaqeccParams, EaqeccParams]:
    """Apply the Hermitian construction to a concrete code.

    GRS codes and structurally MDS codes use d = n−k+1 and d^{⊥H} = k+1; other
    codes need a distance certificate for the code and its Hermitian dual.
    """
    spec = code.spec
    n, k = code.length, code.k
    hull = hull_dim(code).hull_dim
    structural = isinstance(code, GrsCode) or getattr(code, "mds_structural", False)
    if structural:
        d, d_dual = n - k + 1, k + 1
    else:
        try:
            d = min_distance(code).d
            d_dual = min_distance(hermitian_dual(code)).d if k < n else None
        except ModeInfeasible:
            d = d_dual = None
        if d is None or d_dual is None:
            raise UnknownDistance(f"no distance certificate for the [{n},{k}] code or its Hermitian dual")
    first, second = construction_params(spec.q, n, k, hull, d, d_dual, code.provenance)
    if structural and not (first.is_mds or second.is_mds):
        raise BoundViolation(f"neither {first} nor {second} is MDS for an MDS input")
    return first, second


def _check_rule_input(n: int, k: int, l: int, q: int) -> None:
    if q <= 2:
        raise RangeViolation(f"propagation rules need q > 2, got q={q}")
    if not 0 <= 2 * k <= n:
        raise RangeViolation(f"need 0 ≤ 2k ≤ n, got n={n}, k={k}")
    if not 0 <= l <= k:
        raise RangeViolation(f"need 0 ≤ l ≤ k, got l={l}, k={k}")


def _emit(q, rule, n, k, l, i_max, build) -> list[EaqeccParams]:
    out = []
    for i in range(i_max + 1):
        for s in range(l - i + 1):
            N, K, d, c = build(i, s)
            params = EaqeccParams(q, N, K, d, c, (f"{rule}(n={n},k={k},l={l})", f"i={i}", f"s={s}"))
            if params.mds != MDS_BY_EQ1:
                raise BoundViolation(f"{rule} produced {params} without equality in k ≤ c + n − 2d + 2")
            out.append(params)
    return out


def rule_longer_length(n: int, k: int, l: int, q: int) -> list[EaqeccParams]:
    """[[n+i, n+i−k−s, k+1; k−s]] for 0 ≤ i ≤ min(l, q²+1−n), 0 ≤ s ≤ l−i."""
    _check_rule_input(n, k, l, q)
    if n > q * q + 1:
        raise RangeViolation(f"n={n} exceeds q²+1={q * q + 1}")
    i_max = min(l, q * q + 1 - n)
    return _emit(q, "longer-length", n, k, l, i_max, lambda i, s: (n + i, n + i - k - s, k + 1, k - s))


def rule_larger_distance(n: int, k: int, l: int, q: int) -> list[EaqeccParams]:
    """[[n, n−k−i−s, k+i+1; k+i−s]] for 0 ≤ i ≤ min(l, n/2−k), 0 ≤ s ≤ l−i."""
    _check_rule_input(n, k, l, q)
    if n > q * q:
        raise RangeViolation(f"n={n} exceeds q²={q * q}")
    i_max = min(l, n // 2 - k)
    return _emit(q, "larger-distance", n, k, l, i_max, lambda i, s: (n, n - k - i - s, k + i + 1, k + i - s))


def rule_both(n: int, k: int, l: int, q: int) -> list[EaqeccParams]:
    """[[n+i, n−k−s, k+i+1; k+i−s]] for 0 ≤ i ≤ min(l, q²+1−n, n−2k), 0 ≤ s ≤ l−i."""
    _check_rule_input(n, k, l, q)
    if n > q * q + 1:
        raise RangeViolation(f"n={n} exceeds q²+1={q * q + 1}")
    i_max = min(l, q * q + 1 - n, n - 2 * k)
    return _emit(q, "both", n, k, l, i_max, lambda i, s: (n + i, n - k - s, k + i + 1, k + i - s))


class Source(NamedTuple):
    """One (shape, k, l, i, s) that produces a tuple."""

    shape: int
    k: int
    l: int
    i: int
    s: int

    @property
    def witnessable(self) -> bool:
        return self.i >= 0


# shape -> (code length, code dimension, second form?)
SHAPES: dict[int, Callable[[int, int, int], tuple[int, int, bool]]] = {
    1: lambda n, k, i: (n, k + i, True),
    2: lambda n, k, i: (n, k + i, False),
    3: lambda n, k, i: (n + i, k, True),
    4: lambda n, k, i: (n + i, k, False),
    5: lambda n, k, i: (n + i, k + i, True),
    6: lambda n, k, i: (n + i, k + i, False),
}


def shape_i_range(shape: int, n: int, k: int, l: int, q: int) -> range:
    if shape == 1:
        return range(0, min(l, n // 2 - k) + 1)
    if shape == 2:
        return range(0, min(l, n - k) + 1)
    if shape in (3, 4):
        return range(-l, min(l, q * q + 1 - n) + 1)
    return range(-l, min(l, q * q + 1 - n, n - 2 * k) + 1)


@dataclass(frozen=True)
class EnumeratedTuple:
    params: EaqeccParams
    sources: tuple[Source, ...]

    @property
    def shape(self) -> int:
        return min(src.shape for src in self.sources)

    @property
    def shapes(self) -> tuple[int, ...]:
        return tuple(sorted({src.shape for src in self.sources}))

    @property
    def witnessable(self) -> bool:
        return any(src.witnessable for src in self.sources)


def enumeration_family(q: int, family, h: int | None = None) -> FamilySpec:
    if q <= 2:
        raise BadFamilyParams(f"q={q}: the enumeration needs q > 2")
    try:
        return FamilySpec(family, q, h)
    except BadParameters as exc:
        raise BadFamilyParams(str(exc)) from exc


def hull_profile(family: FamilySpec, t_bound: TBound | None = "ceil") -> dict[int, int]:
    """k → guaranteed hull l for every k in 1..⌊n/2⌋ that falls into a branch."""
    profile = {}
    for k in range(1, family.n // 2 + 1):
        try:
            profile[k] = hull_lb_formula(family, k, t_bound).l
        except OutOfRange:
            continue
    return profile


def theorem_q22_enumerate(
    q: int, family, h: int | None = None, t_bound: TBound | None = "ceil"
) -> list[EnumeratedTuple]:
    """All six parameter shapes over every (k, l, i, s), deduplicated by (n, k, d, c)."""
    spec = enumeration_family(q, family, h)
    n = spec.n
    found: dict[tuple, list] = {}
    for shape, shape_fn in SHAPES.items():
        for k, l in hull_profile(spec, t_bound).items():
            for i in shape_i_range(shape, n, k, l, q):
                N, K, second = shape_fn(n, k, i)
                if not 1 <= K <= N:
                    continue
                for s in range(l - abs(i) + 1):
                    if s > min(K, N - K):
                        break
                    first_form, second_form = construction_params(
                        q, N, K, s, N - K + 1, K + 1, (f"shape{shape}",)
                    )
                    params = second_form if second else first_form
                    entry = found.setdefault(params.key, [params, []])
                    entry[1].append(Source(shape, k, l, i, s))
    result = [EnumeratedTuple(params, tuple(sources)) for params, sources in found.values()]
    result.sort(key=lambda t: (t.shape, t.params.n, t.params.d, t.params.c, t.params.k_logical))
    logger.info("Enumerated %d tuples for %s", len(result), spec.label)
    return result


class SummaryRow(NamedTuple):
    t: int
    branch: str
    d_low: int
    d_high: int
    c_formula: str
    c_values: tuple[int, ...]


C_FORMULAS = {
    "full_field": {"B1": "(t-1)^2", "B2": "(t-1)^2+1", "B3": "t^2-2tq+2d-2"},
    "coset_h": {
        "B1": "2(t-1)^2",
        "B2": "2(t^2-t-tq+d+(h-1)(q+1)/h-1)",
        "B3": "2t^2-2t",
        "B4": "2(t^2-tq+d-1)",
    },
    "coset_2h": {
        "B1": "2(t-1)^2",
        "B2": "2t^2-2t-2tq+2d+q-1",
        "B3": "2t^2-2t",
        "B4": "2(t^2-tq+d-1)",
    },
}


def mds_summary_table(
    q: int,
    family,
    h: int | None = None,
    enumerated: Iterable[EnumeratedTuple] | None = None,
    t_bound: TBound | None = "ceil",
) -> list[SummaryRow]:
    """Distance ranges with their entanglement count, one row per (t, branch).

    Each (d, c) is the tuple [[n, n−2d+2+c, d; c]], which must be present in
    the enumeration.
    """
    spec = enumeration_family(q, family, h)
    if enumerated is None:
        enumerated = theorem_q22_enumerate(q, family, h, t_bound)
    keys = {t.params.key for t in enumerated}
    n = spec.n

    grouped: dict[tuple[int, str], list[tuple[int, int]]] = {}
    for k in range(1, n // 2 + 1):
        try:
            bound = hull_lb_formula(spec, k, t_bound)
        except OutOfRange:
            continue
        d, c = k + 1, k - bound.l
        if (n, n - 2 * d + 2 + c, d, c) not in keys:
            raise PredictionMismatch(f"summary tuple [[{n},{n - 2 * d + 2 + c},{d};{c}]] missing from the enumeration")
        grouped.setdefault((bound.t, bound.branch), []).append((d, c))

    rows = []
    for (t, branch), pairs in sorted(grouped.items()):
        ds = [d for d, _ in pairs]
        rows.append(
            SummaryRow(t, branch, min(ds), max(ds), C_FORMULAS[spec.family][branch], tuple(c for _, c in pairs))
        )
    return rows
