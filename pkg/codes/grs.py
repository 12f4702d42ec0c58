"""Generalized Reed-Solomon codes, their Gram matrices and hulls."""

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal, Union

import numpy as np

from . import linalg
from .errors import (
    BadParameters,
    BadPosition,
    InnerProductMismatch,
    ModeInfeasible,
    NegativePowerWithZeroPoint,
    NotQuadraticTower,
    ZeroElement,
    ZeroScale,
)
from .field import FieldSpec, field_from_descriptor, power

logger = logging.getLogger(__name__)

DEFAULT_MAX_MINORS = 1_000_000
DEFAULT_MAX_EXHAUSTIVE = 2**24
EXHAUSTIVE_CHUNK = 1 << 16


@dataclass(frozen=True)
class InnerProduct:
    """Euclidean, Hermitian or e-Galois inner product."""

    kind: Literal["euclidean", "hermitian", "galois"]
    e: int = 0

    @classmethod
    def galois(cls, e: int) -> "InnerProduct":
        return cls("galois", e)

    @classmethod
    def parse(cls, tag: str) -> "InnerProduct":
        if tag in ("euclidean", "hermitian"):
            return cls(tag)
        if tag.startswith("galois(") and tag.endswith(")"):
            return cls.galois(int(tag[7:-1]))
        raise BadParameters(f"unknown inner product {tag!r}")

    @property
    def tag(self) -> str:
        return f"galois({self.e})" if self.kind == "galois" else self.kind

    def validate(self, spec: FieldSpec) -> None:
        if self.kind == "hermitian" and not spec.is_tower:
            raise NotQuadraticTower(f"Hermitian product needs GF(q²), got GF({spec.p}^{spec.m})")
        if self.kind == "galois" and not 0 <= self.e < spec.m:
            raise InnerProductMismatch(f"e={self.e} outside [0, {spec.m}) for GF({spec.p}^{spec.m})")

    def conj_power(self, spec: FieldSpec) -> int:
        """Exponent c with Gram = G·(G^c)ᵀ and dual = ker(G^c)."""
        self.validate(spec)
        if self.kind == "euclidean":
            return 1
        if self.kind == "hermitian":
            return spec.q
        return spec.p ** (spec.m - self.e)

    def adjoint(self, M, spec: FieldSpec):
        self.validate(spec)
        if self.kind == "euclidean":
            return M.T
        if self.kind == "hermitian":
            return linalg.dagger(M, spec)
        return linalg.galois_dagger(M, self.e, spec)


EUCLIDEAN = InnerProduct("euclidean")
HERMITIAN = InnerProduct("hermitian")


@dataclass(frozen=True)
class HullReport:
    inner: str
    gram_rank: int
    hull_dim: int
    k: int

    def __post_init__(self):
        assert 0 <= self.hull_dim <= self.k
        assert self.hull_dim == self.k - self.gram_rank

    @property
    def self_orthogonal(self) -> bool:
        return self.hull_dim == self.k


@dataclass(frozen=True)
class DistanceCertificate:
    """Minimum distance with the evidence that establishes it.

    ``d`` is None when a minor certificate found a singular minor: the code is
    not MDS and no exact distance was computed.
    """

    d: int | None
    mode: str
    is_mds: bool
    detail: str = ""


@dataclass(frozen=True, eq=False)
class GrsCode:
    """GRS_{k,k1}(a, v), optionally extended by the ∞ column."""

    spec: FieldSpec
    a: tuple[int, ...]
    v: tuple[int, ...]
    k: int
    k1: int = 0
    extended: bool = False
    provenance: tuple[str, ...] = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.a) != len(self.v):
            raise BadParameters(f"a has {len(self.a)} entries but v has {len(self.v)}")
        if len(set(self.a)) != len(self.a):
            raise BadParameters("evaluation points must be distinct")
        if any(x == 0 for x in self.v):
            raise BadParameters("column multipliers must be nonzero")
        if any(not 0 <= x < self.spec.order for x in self.a + self.v):
            raise BadParameters("field element rep out of range")
        if not 1 <= self.k <= self.length:
            raise BadParameters(f"dimension {self.k} outside [1, {self.length}]")
        if self.k1 != 0 and 0 in self.a:
            raise NegativePowerWithZeroPoint(f"k1={self.k1} needs every evaluation point nonzero")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def length(self) -> int:
        return self.n + (1 if self.extended else 0)

    @cached_property
    def a_arr(self):
        return self.spec.GF(list(self.a))

    @cached_property
    def v_arr(self):
        return self.spec.GF(list(self.v))

    def row(self, i: int):
        """g_i = (v_1 a_1^i, ..., v_n a_n^i), plus the ∞ coordinate when extended."""
        try:
            values = self.v_arr * power(self.a_arr, i, self.spec)
        except ZeroElement:
            raise NegativePowerWithZeroPoint(f"g_{i} needs a^{i} but 0 is an evaluation point") from None
        if not self.extended:
            return values
        infinity = self.spec.GF([1 if i == self.k1 + self.k - 1 else 0])
        return np.concatenate((values, infinity))

    @cached_property
    def generator(self):
        rows = [self.row(i) for i in range(self.k1, self.k1 + self.k)]
        return np.stack(rows)

    def with_(self, **changes) -> "GrsCode":
        fields = {
            "spec": self.spec,
            "a": self.a,
            "v": self.v,
            "k": self.k,
            "k1": self.k1,
            "extended": self.extended,
            "provenance": self.provenance,
        }
        fields.update(changes)
        return GrsCode(**fields)

    @property
    def descriptor(self) -> dict:
        return {
            "field": self.spec.descriptor,
            "n": self.n,
            "k": self.k,
            "k1": self.k1,
            "extended": self.extended,
            "a": list(self.a),
            "v": list(self.v),
        }


@dataclass(frozen=True, eq=False)
class LinearCode:
    """A code given only by a full-row-rank generator matrix."""

    spec: FieldSpec
    generator: object
    mds_structural: bool = False
    provenance: tuple[str, ...] = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.generator.ndim != 2:
            raise BadParameters("generator must be a matrix")
        if self.generator.shape[0] and linalg.rank(self.generator) != self.generator.shape[0]:
            raise BadParameters("generator rows are linearly dependent")

    @property
    def k(self) -> int:
        return int(self.generator.shape[0])

    @property
    def length(self) -> int:
        return int(self.generator.shape[1])

    @property
    def descriptor(self) -> dict:
        return {
            "field": self.spec.descriptor,
            "n": self.length,
            "k": self.k,
            "mds_structural": self.mds_structural,
            "generator": linalg.as_ints(self.generator),
        }


Code = Union[GrsCode, LinearCode]


def gram(code: Code, inner: InnerProduct = HERMITIAN):
    key = ("gram", inner)
    if key not in code._cache:
        G = code.generator
        code._cache[key] = G @ inner.adjoint(G, code.spec)
    return code._cache[key]


def hull_dim(code: Code, inner: InnerProduct = HERMITIAN) -> HullReport:
    """Hull dimension k − rank(G·op(G))."""
    key = ("hull", inner)
    if key not in code._cache:
        r = linalg.rank(gram(code, inner))
        code._cache[key] = HullReport(inner=inner.tag, gram_rank=r, hull_dim=code.k - r, k=code.k)
    return code._cache[key]


def dual_generator(code: Code, inner: InnerProduct = EUCLIDEAN):
    G = code.generator
    return linalg.kernel(G ** inner.conj_power(code.spec))


def dual(code: Code, inner: InnerProduct = EUCLIDEAN) -> LinearCode:
    """The (n−k)-dimensional annihilator of the code under ``inner``."""
    return LinearCode(
        code.spec,
        dual_generator(code, inner),
        mds_structural=isinstance(code, GrsCode) or getattr(code, "mds_structural", False),
        provenance=code.provenance + (f"dual:{inner.tag}",),
    )


def hermitian_dual(code: Code) -> LinearCode:
    return dual(code, HERMITIAN)


def hull_dim_direct(code: Code, inner: InnerProduct = HERMITIAN) -> int:
    """dim(C ∩ C^⊥) by explicit subspace intersection."""
    D = dual_generator(code, inner)
    if D.shape[0] == 0:
        return 0
    return linalg.intersection_dim(code.generator, D)


def hull_basis(code: Code, inner: InnerProduct = HERMITIAN):
    """Generator rows of the hull C ∩ C^⊥."""
    X = linalg.left_kernel(gram(code, inner))
    return X @ code.generator


def _column_sets(n: int, k: int, chunk: int):
    combos = itertools.combinations(range(n), k)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64)


def _minor_certificate(code: Code, max_minors: int) -> DistanceCertificate:
    n, k = code.length, code.k
    count = math.comb(n, k)
    if count > max_minors:
        raise ModeInfeasible(f"C({n},{k}) = {count} exceeds the minor limit {max_minors}")
    for cols in _column_sets(n, k, linalg.MINOR_CHUNK):
        singular = linalg.all_minors_nonsingular(code.generator, cols)
        if singular is not None:
            return DistanceCertificate(None, "minor-certificate", False, f"singular minor on columns {singular}")
    return DistanceCertificate(n - k + 1, "minor-certificate", True, f"all {count} minors nonsingular")


def _exhaustive(code: Code, max_exhaustive: int) -> DistanceCertificate:
    n, k = code.length, code.k
    Q = code.spec.order
    total = Q**k
    if total > max_exhaustive:
        raise ModeInfeasible(f"{Q}^{k} = {total} codewords exceed the exhaustive limit {max_exhaustive}")
    GF = code.spec.GF
    places = Q ** np.arange(k, dtype=np.int64)
    best = n
    for start in range(1, total, EXHAUSTIVE_CHUNK):
        ids = np.arange(start, min(total, start + EXHAUSTIVE_CHUNK), dtype=np.int64)
        messages = GF((ids[:, np.newaxis] // places) % Q)
        weights = np.count_nonzero((messages @ code.generator).view(np.ndarray), axis=1)
        best = min(best, int(weights.min()))
    return DistanceCertificate(best, "exhaustive", best == n - k + 1, f"{total - 1} nonzero codewords")


def min_distance(
    code: Code,
    mode: str = "auto",
    max_minors: int = DEFAULT_MAX_MINORS,
    max_exhaustive: int = DEFAULT_MAX_EXHAUSTIVE,
) -> DistanceCertificate:
    """Minimum distance by exhaustive search, minor certificate or structure."""
    if code.k == 0:
        return DistanceCertificate(code.length + 1, "structural", True, "zero code")
    if mode == "exhaustive":
        return _exhaustive(code, max_exhaustive)
    if mode == "minor-certificate":
        return _minor_certificate(code, max_minors)
    if mode == "structural":
        if isinstance(code, GrsCode):
            kind = "EGRS" if code.extended else "GRS"
            return DistanceCertificate(code.length - code.k + 1, "structural", True, f"{kind} by construction")
        if code.mds_structural:
            return DistanceCertificate(
                code.length - code.k + 1, "structural", True, "monomially equivalent to a GRS/EGRS code"
            )
        raise ModeInfeasible("structural certificate needs a GRS presentation")
    if mode == "auto":
        Q = code.spec.order
        if Q**code.k <= max_exhaustive:
            return _exhaustive(code, max_exhaustive)
        if math.comb(code.length, code.k) <= max_minors:
            return _minor_certificate(code, max_minors)
        return min_distance(code, "structural")
    raise BadParameters(f"unknown distance mode {mode!r}")


def affine_reparam(code: GrsCode, alpha, b, mu) -> GrsCode:
    """Presentation of the same code on the points αa + b.

    Plain codes take multipliers μv; extended codes take α^{1−k}v and require μ = 1.
    """
    GF = code.spec.GF
    alpha, b, mu = GF(int(alpha)), GF(int(b)), GF(int(mu))
    if alpha == 0 or mu == 0:
        raise ZeroScale("α and μ must be nonzero")
    if code.k1 != 0:
        raise BadParameters("affine reparametrization needs k1 = 0")
    a_new = alpha * code.a_arr + b
    if code.extended:
        if mu != 1:
            raise BadParameters("the ∞ column fixes μ = 1 for extended codes")
        v_new = power(alpha, 1 - code.k, code.spec) * code.v_arr
    else:
        v_new = mu * code.v_arr
    tag = f"affine(alpha={int(alpha)},b={int(b)},mu={int(mu)})"
    return code.with_(
        a=tuple(int(x) for x in a_new),
        v=tuple(int(x) for x in v_new),
        provenance=code.provenance + (tag,),
    )


def smallest_shift(code: GrsCode) -> int:
    """Smallest rep b with every a_i + b nonzero."""
    GF = code.spec.GF
    for b in range(code.spec.order):
        if np.all(code.a_arr + GF(b) != 0):
            return b
    raise BadParameters("evaluation points cover the whole field")


def scale_coordinate(code: Code, position: int, gamma) -> Code:
    """Multiply one generator column by γ ≠ 0."""
    GF = code.spec.GF
    gamma = GF(int(gamma))
    if gamma == 0:
        raise ZeroScale("γ must be nonzero")
    if not 0 <= position < code.length:
        raise BadPosition(f"position {position} outside [0, {code.length})")
    tag = f"scale({position},{int(gamma)})"
    if isinstance(code, GrsCode) and position < code.n:
        v = list(code.v)
        v[position] = int(gamma * GF(v[position]))
        return code.with_(v=tuple(v), provenance=code.provenance + (tag,))
    G = code.generator.copy()
    G[:, position] *= gamma
    return LinearCode(code.spec, G, mds_structural=True, provenance=code.provenance + (tag,))


def code_from_descriptor(descriptor: dict) -> Code:
    spec = field_from_descriptor(descriptor["field"])
    if "generator" in descriptor:
        return LinearCode(
            spec,
            spec.GF(descriptor["generator"]),
            mds_structural=descriptor.get("mds_structural", False),
            provenance=tuple(descriptor.get("provenance", ())),
        )
    return GrsCode(
        spec=spec,
        a=tuple(descriptor["a"]),
        v=tuple(descriptor["v"]),
        k=descriptor["k"],
        k1=descriptor.get("k1", 0),
        extended=descriptor.get("extended", False),
        provenance=tuple(descriptor.get("provenance", ())),
    )
