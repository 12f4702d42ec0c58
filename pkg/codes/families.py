"""Explicit code families with a prescribed Hermitian Gram pattern.

Three evaluation sets are supported:

- ``full_field``: all of GF(q²), n = q².
- ``coset_h``: h−1 cosets of the subgroup of index h, n = (h−1)(q²−1)/h.
- ``coset_2h``: 2h−1 cosets of the subgroup of index 2h, n = (2h−1)(q²−1)/(2h).

The column multipliers come from a kernel solver that makes every
constrained Gram entry g_i g_j† vanish while keeping all multipliers in
GF(q)*. Entry g_i g_j† equals Σ u_l a_l^{i+qj} with u_l = v_l^{q+1}, so the
constraints are linear in u.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cache
from math import gcd
from typing import Literal, NamedTuple

import numpy as np

from . import linalg
from .errors import BadParameters, NoAllNonzeroSolution, OutOfRange, PredictionMismatch
from .field import FieldSpec, ceil_div, is_prime_power, make_tower, norm_roots, power
from .grs import GrsCode, gram, hull_dim
from .rules import RuleOutcome

logger = logging.getLogger(__name__)

FAMILY_ALIASES = {
    "full_field": "full_field",
    "full-field": "full_field",
    "1": "full_field",
    "coset_h": "coset_h",
    "coset-h": "coset_h",
    "2": "coset_h",
    "coset_2h": "coset_2h",
    "coset-2h": "coset_2h",
    "3": "coset_2h",
}

FAMILY_NUMBERS = {"full_field": 1, "coset_h": 2, "coset_2h": 3}

TBound = Literal["ceil", "floor"]


class SearchParams(NamedTuple):
    """Knobs for the randomized all-nonzero kernel search."""

    seed: int = 1729
    samples: int = 200_000
    batch: int = 4096


@dataclass(frozen=True)
class FamilySpec:
    family: str
    q: int
    h: int | None = None

    def __post_init__(self):
        name = FAMILY_ALIASES.get(str(self.family))
        if name is None:
            raise BadParameters(f"unknown family {self.family!r}")
        object.__setattr__(self, "family", name)
        if not is_prime_power(self.q):
            raise BadParameters(f"q={self.q} is not a prime power")
        if name == "full_field":
            object.__setattr__(self, "h", None)
            return
        h, q = self.h, self.q
        if h is None or h < 2 or (q + 1) % h:
            raise BadParameters(f"{name} needs h ≥ 2 dividing q+1={q + 1}, got h={h}")
        if name == "coset_h" and (q + 1) // h < 2:
            raise BadParameters(f"coset_h needs (q+1)/h ≥ 2, got {(q + 1) // h}")
        if name == "coset_2h":
            if q % 2 == 0:
                raise BadParameters(f"coset_2h needs q odd, got q={q}")
            tau2 = (q + 1) // h
            if tau2 % 2 == 0 or tau2 < 3:
                raise BadParameters(f"coset_2h needs (q+1)/h odd and ≥ 3, got {tau2}")

    @property
    def number(self) -> int:
        return FAMILY_NUMBERS[self.family]

    @property
    def N(self) -> int:
        return self.q * self.q - 1

    @property
    def cosets(self) -> int:
        """Index of the coset subgroup, or 0 for the full field."""
        return {"full_field": 0, "coset_h": self.h, "coset_2h": 2 * (self.h or 0)}[self.family]

    @property
    def n(self) -> int:
        if self.family == "full_field":
            return self.q * self.q
        m = self.cosets
        return (m - 1) * self.N // m

    @property
    def H(self) -> int:
        """Branch offset of the piecewise hull bound (0 for the full field)."""
        q = self.q
        if self.family == "coset_h":
            return (self.h - 1) * (q + 1) // self.h
        if self.family == "coset_2h":
            return (q + 1) // 2
        return 0

    @property
    def exceptional_pairs(self) -> tuple[tuple[int, int], ...]:
        q = self.q
        if self.family == "full_field":
            return ((q - 1, q - 1),)
        j = (q + 1) // self.h - 2 if self.family == "coset_h" else (q + 1) // 2 - 2
        return ((q - 1, j), (j, q - 1))

    def t_max(self, bound: TBound | None = None) -> int:
        if bound is None:
            bound = "floor" if self.family == "coset_2h" else "ceil"
        if bound == "ceil":
            return ceil_div(self.n, 2 * self.q)
        if bound == "floor":
            return self.n // (2 * self.q)
        raise BadParameters(f"unknown t bound {bound!r}")

    @property
    def label(self) -> str:
        return self.family if self.h is None else f"{self.family}(h={self.h})"

    @property
    def descriptor(self) -> dict:
        return {"family": self.family, "q": self.q, "h": self.h, "n": self.n}


def constraint_pairs(q: int, exceptional) -> list[tuple[int, int]]:
    skip = set(exceptional)
    return [(i, j) for j in range(q) for i in range(q) if (i, j) not in skip]


def _split_over_subfield(A, spec: FieldSpec):
    """Rows X, Y with A = X + αY and X, Y entrywise in GF(q)."""
    _, alpha = spec.tower_basis
    q = spec.q
    Y = (A - A**q) / (alpha - alpha**q)
    X = A - Y * alpha
    return X, Y


def _normalized(u):
    return u / u[0]


def _search_kernel(K, spec: FieldSpec, params: SearchParams):
    d = K.shape[0]
    if d == 1:
        u = K[0]
        return _normalized(u) if np.all(u != 0) else None

    subfield = spec.subfield_elements
    rng = np.random.default_rng(params.seed)
    tried = 0
    while tried < params.samples:
        size = min(params.batch, params.samples - tried)
        coeffs = subfield[rng.integers(0, len(subfield), size=(size, d))]
        combos = coeffs @ K
        hits = np.flatnonzero(np.all(combos.view(np.ndarray) != 0, axis=1))
        if hits.size:
            logger.debug("kernel search hit after %d samples", tried + int(hits[0]) + 1)
            return _normalized(combos[int(hits[0])])
        tried += size

    if d <= 3:
        logger.debug("randomized search failed; enumerating %d combinations", len(subfield) ** d)
        indices = np.array(list(itertools.product(range(len(subfield)), repeat=d)))
        combos = subfield[indices] @ K
        hits = np.flatnonzero(np.all(combos.view(np.ndarray) != 0, axis=1))
        if hits.size:
            return _normalized(combos[int(hits[0])])
    return None


def solve_selforth_multipliers(
    spec: FieldSpec,
    a,
    constraints,
    params: SearchParams = SearchParams(),
):
    """Find u ∈ (GF(q)*)ⁿ with Σ_l u_l a_l^{i+qj} = 0 for every (i, j) in ``constraints``."""
    q = spec.q
    points = spec.GF([int(x) for x in a])
    n = points.shape[0]
    constraints = list(constraints)
    if constraints:
        A = np.stack([power(points, i + q * j, spec) for i, j in constraints])
        X, Y = _split_over_subfield(A, spec)
        K = linalg.kernel(np.concatenate((X, Y), axis=0))
    else:
        K = spec.GF.Identity(n)

    if K.shape[0] == 0:
        raise NoAllNonzeroSolution(f"the {len(constraints)} constraints leave only u = 0")
    forced = np.flatnonzero(np.all(K.view(np.ndarray) == 0, axis=0))
    if forced.size:
        raise NoAllNonzeroSolution(f"coordinates {forced.tolist()} are forced to zero")

    logger.debug("multiplier kernel: n=%d, dim=%d", n, K.shape[0])
    u = _search_kernel(K, spec, params)
    if u is None:
        raise NoAllNonzeroSolution(
            f"no all-nonzero vector found in a {K.shape[0]}-dimensional kernel (seed={params.seed})"
        )
    assert np.all(u**q == u)
    return u


def coset_points(spec: FieldSpec, index: int) -> tuple[int, ...]:
    """Cosets θ^r⟨θ^index⟩ for r = 0..index−2, each ascending by power of θ^index."""
    N = spec.order - 1
    exponents = [r + index * s for r in range(index - 1) for s in range(N // index)]
    return tuple(int(spec.theta**e) for e in exponents)


def evaluation_points(family: FamilySpec, spec: FieldSpec) -> tuple[int, ...]:
    if family.family == "full_field":
        return tuple(range(spec.order))
    return coset_points(spec, family.cosets)


def exceptional_support_sizes(q: int, exceptional) -> frozenset[int] | None:
    """Support sizes of multipliers u whose Gram entries vanish off the exceptional pairs.

    When the constrained exponents cover every residue mod q²−1 except the two
    exceptional ones e1, e2, the multiplier function is u(θ^k) = θ^{−k e1}(c1 + c2 ω^k)
    with ω of order (q²−1)/gcd(q²−1, e2−e1). Nonzero exceptional entries force
    c1, c2 ≠ 0, so u vanishes on at most one residue class of k mod that order.
    Returns None when the constraints do not pin u to that shape.
    """
    N = q * q - 1
    exceptional = tuple(exceptional)
    special = {(i + q * j) % N for i, j in exceptional}
    covered = {(i + q * j) % N for i, j in constraint_pairs(q, exceptional)}
    if len(special) != 2 or covered & special or len(covered | special) != N:
        return None
    e1, e2 = sorted(special)
    order = N // gcd(N, e2 - e1)
    return frozenset({N, N - N // order})


def _verify_pattern(code: GrsCode, family: FamilySpec) -> None:
    M = gram(code)
    for i, j in constraint_pairs(family.q, family.exceptional_pairs):
        if M[i, j] != 0:
            raise PredictionMismatch(f"{family.label}: Gram entry ({i},{j}) is nonzero")
    for i, j in family.exceptional_pairs:
        if M[i, j] == 0:
            raise PredictionMismatch(f"{family.label}: exceptional Gram entry ({i},{j}) vanished")


@cache
def _build(family: FamilySpec, params: SearchParams) -> GrsCode:
    spec = make_tower(family.q)
    a = evaluation_points(family, spec)
    constraints = constraint_pairs(family.q, family.exceptional_pairs)
    u = solve_selforth_multipliers(spec, a, constraints, params)
    v = norm_roots(u, spec)
    code = GrsCode(
        spec=spec,
        a=a,
        v=tuple(int(x) for x in v),
        k=family.q,
        provenance=(f"family:{family.family}(q={family.q},h={family.h})",),
    )
    _verify_pattern(code, family)
    logger.info("Built %s: n=%d, k=%d", family.label, code.n, code.k)
    return code


def build_full_field(q: int, params: SearchParams = SearchParams()) -> GrsCode:
    """[q², q] code whose Gram vanishes except at (q−1, q−1)."""
    return _build(FamilySpec("full_field", q), params)


def build_coset_h(q: int, h: int, params: SearchParams = SearchParams()) -> GrsCode:
    return _build(FamilySpec("coset_h", q, h), params)


def build_coset_2h(q: int, h: int, params: SearchParams = SearchParams()) -> GrsCode:
    """Coset family of index 2h.

    The two exceptional exponents differ by (q²−1)/2, which only admits
    multipliers supported on half or all of GF(q²)*; the evaluation set has
    neither size, so no all-nonzero multipliers exist.
    """
    family = FamilySpec("coset_2h", q, h)
    sizes = exceptional_support_sizes(q, family.exceptional_pairs)
    diagnostic = f"admissible support sizes {sorted(sizes)} exclude n={family.n}" if sizes else ""
    try:
        return _build(family, params)
    except (NoAllNonzeroSolution, PredictionMismatch) as exc:
        raise NoAllNonzeroSolution(f"{family.label}: {exc}; {diagnostic}".rstrip("; ")) from exc


def build_family(family: FamilySpec, params: SearchParams = SearchParams()) -> GrsCode:
    if family.family == "full_field":
        return build_full_field(family.q, params)
    if family.family == "coset_h":
        return build_coset_h(family.q, family.h, params)
    return build_coset_2h(family.q, family.h, params)


class FormulaBound(NamedTuple):
    t: int
    l: int
    ambiguous: bool
    branch: str


def _branches(family: FamilySpec, t: int, k: int):
    q = family.q
    if family.family == "full_field":
        yield "B1", (t - 1) * q + 1, t * q - t, k - (t - 1) ** 2
        yield "B2", t * q - t + 1, t * q - t + 1, k - (t - 1) ** 2 - 1
        yield "B3", t * q - t + 2, t * q, 2 * t * q - t * t - k
        return
    H = family.H
    yield "B1", (t - 1) * q + 1, t * q - t - H + 1, k - 2 * (t - 1) ** 2
    yield "B2", t * q - t - H + 2, t * q - H, 2 * t * q + 2 * t - 2 * t * t - k - 2 * H
    yield "B3", t * q - H + 1, t * q - t, k + 2 * t - 2 * t * t
    yield "B4", t * q - t + 1, t * q, 2 * t * q - 2 * t * t - k


def hull_lb_formula(family: FamilySpec, k: int, t_bound: TBound | None = None) -> FormulaBound:
    """Piecewise lower bound on the Hermitian hull of the k-dimensional family code.

    Overlapping branches resolve to the largest bound and are flagged ambiguous.
    """
    if not 1 <= k <= family.n // 2:
        raise OutOfRange(f"k={k} outside [1, {family.n // 2}] for {family.label}")
    matches = [
        (l, t, name)
        for t in range(1, family.t_max(t_bound) + 1)
        for name, low, high, l in _branches(family, t, k)
        if low <= k <= high
    ]
    if not matches:
        raise OutOfRange(f"k={k} lies in no branch for {family.label} (t ≤ {family.t_max(t_bound)})")
    l, t, name = max(matches)
    return FormulaBound(t=t, l=max(l, 0), ambiguous=len(matches) > 1, branch=name)


def build_family_code(
    family: FamilySpec,
    k: int,
    params: SearchParams = SearchParams(),
    t_bound: TBound | None = None,
) -> RuleOutcome:
    """Leading k rows of the family code, checked against the hull bound."""
    bound = hull_lb_formula(family, k, t_bound)
    base = build_family(family, params)
    code = base.with_(k=k, provenance=base.provenance + (f"rows(0..{k - 1})",))
    return RuleOutcome(
        code=code,
        predicted_hull_lb=bound.l,
        computed_hull=hull_dim(code),
        rule_tag=f"family:{family.family}",
        cases=(f"t={bound.t}", bound.branch),
        flags=("branch-overlap",) if bound.ambiguous else (),
    )


def gram_census(code: GrsCode) -> tuple[tuple[int, int], ...]:
    """Positions of the nonzero entries of the Hermitian Gram."""
    M = gram(code).view(np.ndarray)
    return tuple((int(i), int(j)) for i, j in zip(*np.nonzero(M)))


def predicted_census(family: FamilySpec, k: int) -> tuple[tuple[int, int], ...]:
    """Positions of the k-order leading Gram submatrix whose exponent hits an exceptional residue."""
    q, N = family.q, family.N
    if family.family == "full_field":
        hit = lambda e: e > 0 and e % N == 0  # noqa: E731
    else:
        special = {(i + q * j) % N for i, j in family.exceptional_pairs}
        hit = lambda e: e % N in special  # noqa: E731
    return tuple((i, j) for i in range(k) for j in range(k) if hit(i + q * j))


def full_field_census_formula(q: int, k: int) -> int:
    """λ_k: the number of (i, j) in [0, k−1]² with i + qj a positive multiple of q²−1."""
    N = q * q - 1
    return sum(1 for i in range(k) for j in range(k) if i + q * j > 0 and (i + q * j) % N == 0)
