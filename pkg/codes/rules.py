"""Propagation rules: longer length, larger dimension, both, and hull reduction.

Each rule returns a ``RuleOutcome`` that pairs the constructed code with the
hull dimension the corresponding proposition predicts. The outcome checks the
prediction against the Gram rank of the new code when it is built.
"""

import logging
from dataclasses import dataclass, field
from functools import cache
from typing import Iterator, Literal, NamedTuple

import numpy as np

from . import linalg
from .errors import (
    BadParameters,
    CornerNotCancellable,
    DimensionFull,
    FieldFull,
    HullShapeMismatch,
    LambdaNotInSubfield,
    NegativePowerWithZeroPoint,
    NotFullField,
    OutOfRange,
    PredictionMismatch,
    SearchExhausted,
    TargetAboveCurrent,
)
from .field import FieldSpec, in_subfield, norm_root, power
from .grs import (
    HERMITIAN,
    Code,
    GrsCode,
    HullReport,
    InnerProduct,
    affine_reparam,
    gram,
    hull_basis,
    hull_dim,
    scale_coordinate,
    smallest_shift,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RuleOutcome:
    """A constructed code with its predicted and computed Hermitian hull.

    ``exact_hull`` is set when one of the exact cases of the rule applies;
    ``predicted_hull_lb`` is the proven lower bound otherwise.
    """

    code: Code
    predicted_hull_lb: int
    computed_hull: HullReport
    rule_tag: str
    source_hull: int | None = None
    cases: tuple[str, ...] = ()
    exact_hull: int | None = None
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        computed = self.computed_hull.hull_dim
        if computed < self.predicted_hull_lb:
            raise PredictionMismatch(
                f"{self.rule_tag}: computed hull {computed} below the predicted bound {self.predicted_hull_lb}"
            )
        if self.exact_hull is not None and computed != self.exact_hull:
            raise PredictionMismatch(
                f"{self.rule_tag}: computed hull {computed} differs from the exact prediction {self.exact_hull}"
            )

    @property
    def hull_dim(self) -> int:
        return self.computed_hull.hull_dim

    @property
    def record(self) -> dict:
        return {
            **self.code.descriptor,
            "rule_tag": self.rule_tag,
            "cases": list(self.cases),
            "flags": list(self.flags),
            "predicted_hull_lb": self.predicted_hull_lb,
            "exact_hull": self.exact_hull,
            "source_hull": self.source_hull,
            "hull_dim": self.hull_dim,
            "gram_rank": self.computed_hull.gram_rank,
        }


class Classification(NamedTuple):
    cases: tuple[str, ...]
    exact: int | None
    lower: int
    flags: tuple[str, ...]


def _require_plain_tower(code: Code, rule: str) -> GrsCode:
    if not isinstance(code, GrsCode):
        raise BadParameters(f"{rule} needs a GRS presentation")
    if code.extended:
        raise BadParameters(f"{rule} needs a non-extended GRS code")
    if not code.spec.is_tower:
        raise BadParameters(f"{rule} needs a code over GF(q²)")
    return code


def _subfield_scalar(lam, spec: FieldSpec):
    lam = spec.GF(int(lam))
    if lam == 0 or not in_subfield(lam, spec):
        raise LambdaNotInSubfield(f"λ={int(lam)} must be a nonzero element of GF({spec.q})")
    return lam


def _without_zero_point(code: GrsCode) -> tuple[GrsCode, str | None]:
    if 0 not in code.a:
        return code, None
    if code.k1 != 0:
        raise NegativePowerWithZeroPoint("0 is an evaluation point of a code with k1 ≠ 0")
    b = smallest_shift(code)
    logger.debug("Shifting evaluation points by b=%d to clear the zero point", b)
    return affine_reparam(code, 1, b, 1), f"reparam(b={b})"


def _unit(k: int, index: int, value, spec: FieldSpec):
    S = spec.GF.Zeros((k, k))
    S[index, index] = value
    return S


def extend_length_infty(code: Code, lam) -> RuleOutcome:
    """GRS_k(a, ξv, ∞) with ξ^{q+1} = λ⁻¹; Gram rank = rank(GG† + λE_kk)."""
    code = _require_plain_tower(code, "extend-length")
    spec = code.spec
    lam = _subfield_scalar(lam, spec)
    source = hull_dim(code)
    xi = norm_root(np.reciprocal(lam), spec)
    new = code.with_(
        v=tuple(int(x) for x in xi * code.v_arr),
        extended=True,
        provenance=code.provenance + (f"extend-length-infty(lambda={int(lam)})",),
    )
    k = code.k
    exact = k - linalg.rank(gram(code) + _unit(k, k - 1, lam, spec))
    return RuleOutcome(
        code=new,
        predicted_hull_lb=max(source.hull_dim - 1, 0),
        computed_hull=hull_dim(new),
        rule_tag="extend-length-infty",
        source_hull=source.hull_dim,
        cases=("gram+S_lambda",),
        exact_hull=exact,
    )


def extend_length_zero(code: Code, lam) -> RuleOutcome:
    """GRS_k((0,a), (ξ,v)) with ξ^{q+1} = λ; Gram rank = rank(GG† + λE_11)."""
    code = _require_plain_tower(code, "extend-length-zero")
    spec = code.spec
    if code.k1 != 0:
        raise BadParameters("adding the zero point needs k1 = 0")
    if code.n >= spec.q**2:
        raise FieldFull(f"all {spec.q ** 2} field elements are already evaluation points")
    lam = _subfield_scalar(lam, spec)
    base, shift = _without_zero_point(code)
    source = hull_dim(base)
    xi = norm_root(lam, spec)
    tags = tuple(t for t in (shift, f"extend-length-zero(lambda={int(lam)})") if t)
    new = GrsCode(
        spec=spec,
        a=(0,) + base.a,
        v=(int(xi),) + base.v,
        k=base.k,
        provenance=base.provenance + tags,
    )
    exact = base.k - linalg.rank(gram(base) + _unit(base.k, 0, lam, spec))
    return RuleOutcome(
        code=new,
        predicted_hull_lb=max(source.hull_dim - 1, 0),
        computed_hull=hull_dim(new),
        rule_tag="extend-length-zero",
        source_hull=source.hull_dim,
        cases=("gram+S_bar_lambda",),
        exact_hull=exact,
        flags=(shift,) if shift else (),
    )


def extend_length_both(code: Code, lam_zero, lam_infty) -> RuleOutcome:
    """Zero extension followed by the ∞ extension: [n+2, k] with hull ≥ l − 2."""
    first = extend_length_zero(code, lam_zero)
    second = extend_length_infty(first.code, lam_infty)
    spec = code.spec
    base = first.code
    k = base.k
    # first.code's Gram already carries λ_zero at (1,1)
    exact = k - linalg.rank(gram(base) + _unit(k, k - 1, spec.GF(int(lam_infty)), spec))
    source = first.source_hull
    return RuleOutcome(
        code=second.code,
        predicted_hull_lb=max(source - 2, 0),
        computed_hull=second.computed_hull,
        rule_tag="extend-length-both",
        source_hull=source,
        cases=("gram+S_lambda+S_bar_lambda",),
        exact_hull=exact,
        flags=first.flags,
    )


def added_row_matrix(g, corner, spec: FieldSpec):
    """S = corner·E_n − g†g, the n×n matrix of the added-row rank argument."""
    n = g.shape[0]
    S = spec.GF.Identity(n) * corner
    return S - np.outer(g ** spec.q, g).view(spec.GF)


def classify_added_row(code: GrsCode, g, shift, case3_lower: int) -> Classification:
    """Case analysis for bordering the Gram of ``code`` with the row ``g``.

    The corner of the bordered Gram is gg† + shift. Every applicable case is
    recorded; exact predictions from different cases must agree.
    """
    spec = code.spec
    M = gram(code)
    G = code.generator
    l = code.k - linalg.rank(M)
    b = G @ (g ** spec.q)
    corner = np.sum(g * g**spec.q) + shift

    in_dual = bool(np.all(b == 0))
    X = linalg.left_kernel(M)
    hull_orthogonal = X.shape[0] == 0 or bool(np.all((X @ b) == 0))

    cases: list[str] = []
    exacts: list[int] = []
    flags: list[str] = []
    lower = max(l - 1, 0)
    if in_dual and corner == 0:
        cases.append("case1")
        exacts.append(l + 1)
    if not hull_orthogonal:
        cases.append("case2")
        exacts.append(l - 1)
    if hull_orthogonal and not (in_dual and corner == 0):
        cases.append("case3")
        lower = max(lower, case3_lower)
    if corner != 0:
        cases.append("case4")
        S = added_row_matrix(g, corner, spec)
        exacts.append(code.k - linalg.rank(G @ S @ linalg.dagger(G, spec)))

    if len(set(exacts)) > 1:
        raise PredictionMismatch(f"exact cases {cases} disagree: {exacts}")
    exact = exacts[0] if exacts else None
    return Classification(tuple(cases), exact, lower, tuple(flags))


def _finish_case3(cls: Classification, computed: HullReport, l: int) -> tuple[str, ...]:
    if "case3" in cls.cases and computed.hull_dim == l - 1:
        return cls.flags + ("case3-attains-l-1",)
    return cls.flags


def increase_dim(code: Code, direction: Literal["up", "down"] = "up") -> RuleOutcome:
    """Add g_{k1+k} (up) or g_{k1−1} (down) to the generator."""
    code = _require_plain_tower(code, "increase-dim")
    if code.k >= code.n:
        raise DimensionFull(f"dimension {code.k} already equals the length {code.n}")
    l = hull_dim(code).hull_dim
    if direction == "up":
        g = code.row(code.k1 + code.k)
        new = code.with_(k=code.k + 1, provenance=code.provenance + ("increase-dim(up)",))
    elif direction == "down":
        if 0 in code.a:
            raise NegativePowerWithZeroPoint("adding g_{k1-1} needs every evaluation point nonzero")
        g = code.row(code.k1 - 1)
        new = code.with_(k=code.k + 1, k1=code.k1 - 1, provenance=code.provenance + ("increase-dim(down)",))
    else:
        raise BadParameters(f"unknown direction {direction!r}")

    cls = classify_added_row(code, g, code.spec.GF(0), case3_lower=max(l - 1, 0))
    computed = hull_dim(new)
    return RuleOutcome(
        code=new,
        predicted_hull_lb=cls.exact if cls.exact is not None else cls.lower,
        computed_hull=computed,
        rule_tag=f"increase-dim({direction})",
        source_hull=l,
        cases=cls.cases,
        exact_hull=cls.exact,
        flags=_finish_case3(cls, computed, l),
    )


def extend_both(code: Code, lam=None, at: Literal["infty", "zero"] = "infty") -> RuleOutcome:
    """[n+1, k+1] code: one more coordinate and one more row.

    At ∞ this is GRS_{k+1}(a, ξv, ∞) with ξ^{q+1} = λ⁻¹. At the zero point it is
    GRS_{k+1}((0,a), (ξ, v/a)) with ξ^{q+1} = λ. ``lam=None`` cancels the
    corner with λ = −gg†.
    """
    code = _require_plain_tower(code, "extend-both")
    spec = code.spec
    tags: tuple[str, ...] = ()
    if at == "zero":
        if code.k1 != 0:
            raise BadParameters("the zero-point step needs k1 = 0")
        if code.n >= spec.q**2:
            raise FieldFull(f"all {spec.q ** 2} field elements are already evaluation points")
        code, shift = _without_zero_point(code)
        tags = (shift,) if shift else ()
        g = code.row(-1)
    elif at == "infty":
        g = code.row(code.k1 + code.k)
    else:
        raise BadParameters(f"unknown extension point {at!r}")

    norm = np.sum(g * g**spec.q)
    if lam is None:
        if norm == 0:
            raise CornerNotCancellable("gg† = 0, the corner cannot be cancelled by a nonzero λ")
        lam = -norm
    lam = _subfield_scalar(lam, spec)
    l = hull_dim(code).hull_dim

    if at == "infty":
        xi = norm_root(np.reciprocal(lam), spec)
        new = code.with_(
            k=code.k + 1,
            v=tuple(int(x) for x in xi * code.v_arr),
            extended=True,
            provenance=code.provenance + (f"extend-both-infty(lambda={int(lam)})",),
        )
    else:
        xi = norm_root(lam, spec)
        v_shifted = code.v_arr * power(code.a_arr, -1, spec)
        new = GrsCode(
            spec=spec,
            a=(0,) + code.a,
            v=(int(xi),) + tuple(int(x) for x in v_shifted),
            k=code.k + 1,
            provenance=code.provenance + tags + (f"extend-both-zero(lambda={int(lam)})",),
        )

    cls = classify_added_row(code, g, lam, case3_lower=l)
    computed = hull_dim(new)
    return RuleOutcome(
        code=new,
        predicted_hull_lb=cls.exact if cls.exact is not None else cls.lower,
        computed_hull=computed,
        rule_tag=f"extend-both({at})",
        source_hull=l,
        cases=cls.cases,
        exact_hull=cls.exact,
        flags=tags + _finish_case3(cls, computed, l),
    )


@dataclass(frozen=True)
class HullReduction:
    code: Code
    hull: HullReport
    steps: tuple[tuple[int, ...], ...] = field(default=())


@cache
def _scale_candidates(spec: FieldSpec, inner: InnerProduct) -> tuple[tuple[int, object], ...]:
    """Scalars θ^t by ascending t, one per distinct Gram factor γ^{1+c} ≠ 1."""
    c = inner.conj_power(spec)
    seen = set()
    candidates = []
    for t in range(1, spec.order - 1):
        gamma = spec.theta**t
        factor = gamma ** (1 + c)
        key = int(factor)
        if key == 1 or key in seen:
            continue
        seen.add(key)
        candidates.append((t, factor))
    return tuple(candidates)


def _reduction_positions(code: Code, inner: InnerProduct) -> list[int]:
    if inner.kind == "hermitian":
        # columns outside the hull support lie in the Gram's column space
        support = np.any(hull_basis(code, inner).view(np.ndarray) != 0, axis=0)
        return [int(j) for j in np.flatnonzero(support)]
    return list(range(code.length))


def _single_move(code: Code, inner: InnerProduct):
    spec = code.spec
    c = inner.conj_power(spec)
    G = code.generator
    M = gram(code, inner)
    target = linalg.rank(M) + 1
    one = spec.GF(1)
    for j in _reduction_positions(code, inner):
        col = G[:, j]
        O = np.outer(col, col**c).view(spec.GF)
        for t, factor in _scale_candidates(spec, inner):
            if linalg.rank(M + (factor - one) * O) == target:
                return ((j, t),)
    return None


def _pair_move(code: Code, inner: InnerProduct):
    spec = code.spec
    c = inner.conj_power(spec)
    G = code.generator
    M = gram(code, inner)
    target = linalg.rank(M) + 1
    one = spec.GF(1)
    positions = list(range(code.length))
    candidates = _scale_candidates(spec, inner)
    for x, j1 in enumerate(positions):
        O1 = np.outer(G[:, j1], G[:, j1] ** c).view(spec.GF)
        for j2 in positions[x + 1 :]:
            O2 = np.outer(G[:, j2], G[:, j2] ** c).view(spec.GF)
            for t1, f1 in candidates:
                for t2, f2 in candidates:
                    if linalg.rank(M + (f1 - one) * O1 + (f2 - one) * O2) == target:
                        return ((j1, t1), (j2, t2))
    return None


def _check_reducible(spec: FieldSpec, inner: InnerProduct) -> None:
    inner.validate(spec)
    if inner.kind == "hermitian" and spec.q <= 2:
        raise BadParameters("Hermitian hull reduction needs q > 2")
    if inner.kind == "galois" and spec.order <= 4:
        raise BadParameters("Galois hull reduction needs a field with more than 4 elements")
    if inner.kind == "euclidean" and spec.order <= 3:
        raise BadParameters("Euclidean hull reduction needs a field with more than 3 elements")


def iter_hull_reduction(code: Code, target_s: int, inner: InnerProduct = HERMITIAN) -> Iterator[HullReduction]:
    """Yield the code after every accepted step, each with hull one lower than before."""
    spec = code.spec
    _check_reducible(spec, inner)
    current = hull_dim(code, inner).hull_dim
    if target_s < 0 or target_s > current:
        raise TargetAboveCurrent(f"target hull {target_s} outside [0, {current}]")
    steps: tuple[tuple[int, ...], ...] = ()
    while current > target_s:
        move = _single_move(code, inner) or _pair_move(code, inner)
        if move is None:
            error = SearchExhausted(f"no scaling lowers the {inner.tag} hull below {current}")
            error.descriptor = code.descriptor
            raise error
        for position, t in move:
            code = scale_coordinate(code, position, spec.theta**t)
            steps += ((position, t),)
        report = hull_dim(code, inner)
        if report.hull_dim != current - 1:
            raise PredictionMismatch(f"scaling moved the hull from {current} to {report.hull_dim}")
        current = report.hull_dim
        logger.debug("hull_reduce: %s hull now %d after %s", inner.tag, current, move)
        yield HullReduction(code, report, steps)


def hull_reduce(code: Code, target_s: int, inner: InnerProduct = HERMITIAN) -> HullReduction:
    """Monomially equivalent code whose hull has dimension exactly ``target_s``."""
    result = HullReduction(code, hull_dim(code, inner))
    for result in iter_hull_reduction(code, target_s, inner):
        pass
    return result


def self_orthogonal_extension(code: Code) -> GrsCode:
    """[n+1, k] Hermitian self-orthogonal EGRS code from a code whose Gram is zero except its last corner."""
    code = _require_plain_tower(code, "self-orthogonal-extension")
    M = gram(code)
    k = code.k
    corner = M[k - 1, k - 1]
    rest = M.copy()
    rest[k - 1, k - 1] = 0
    if corner == 0 or np.any(rest != 0):
        raise HullShapeMismatch("Gram must vanish everywhere except a nonzero bottom-right corner")
    outcome = extend_length_infty(code, -corner)
    if np.any(gram(outcome.code) != 0):
        raise PredictionMismatch("extension is not self-orthogonal")
    return outcome.code


class GramBlocks:
    """q×q block view of the q²×q² Gram of the full-field code.

    ``block(s, t)`` takes row block t and column block s, so the entry
    g_s g_t† sits at both its first and last diagonal positions.
    """

    def __init__(self, spec: FieldSpec, gram_matrix):
        self.spec = spec
        self.q = spec.q
        self.gram = gram_matrix

    def block(self, s: int, t: int):
        q = self.q
        return self.gram[t * q : (t + 1) * q, s * q : (s + 1) * q]

    @property
    def base(self):
        """The entries g_i g_j† for 0 ≤ i, j ≤ q−1."""
        return self.gram[: self.q, : self.q]

    def reduced_pair(self, i: int, j: int) -> tuple[int, int]:
        q = self.q
        e = i + q * j
        if e == 0:
            return 0, 0
        r = e % (q * q - 1) or q * q - 1
        return r % q, r // q

    def drawn_from_base(self) -> bool:
        n = self.q**2
        base = self.base
        return all(
            self.gram[i, j] == base[self.reduced_pair(i, j)] for i in range(n) for j in range(n)
        )

    def folding_holds(self) -> bool:
        M = self.gram
        n = self.q**2
        q = self.q
        for i in range(n):
            for j in range(n):
                if i >= q and j + 1 < n and M[i, j] != M[i - q, j + 1]:
                    return False
                if j >= q and i + 1 < n and M[i, j] != M[i + 1, j - q]:
                    return False
        return True

    def multiplicity(self, s: int, t: int) -> int:
        """How often the entry g_s g_t† occurs in block(s, t)."""
        q = self.q
        count = 0
        for i in range(q):
            for j in range(q):
                if self.reduced_pair(t * q + i, s * q + j) == (s, t):
                    count += 1
        return count


def full_gram_blocks(a, v, spec: FieldSpec) -> GramBlocks:
    q = spec.q
    a = tuple(int(x) for x in a)
    if len(a) != q * q or set(a) != set(range(q * q)):
        raise NotFullField(f"evaluation points must enumerate all of GF({q}²)")
    code = GrsCode(spec=spec, a=a, v=tuple(int(x) for x in v), k=q * q)
    return GramBlocks(spec, gram(code))


class Bound(NamedTuple):
    value: int
    raw: int
    vacuous: bool


def hull_bound_2q(n: int, k: int, k_prime: int, q: int) -> Bound:
    """Achievable hull bound from an [n, k'] self-orthogonal GRS code, clamped at 0."""
    if not (n > q + 1 and 1 <= k_prime <= q - 1 and k_prime <= k <= min(q + k_prime - 1, n)):
        raise OutOfRange(f"(n={n}, k={k}, k'={k_prime}) outside the admissible range for q={q}")
    if k <= q:
        raw = 2 * k_prime - k
    else:
        raw = max(2 * k_prime - k, k + 4 * k_prime - 4 * q)
    return Bound(max(raw, 0), raw, raw < 0)
