"""Finite fields GF(p^m) with deterministic moduli and the quadratic tower GF(q²).

Field elements are ``galois`` scalars; their integer value is the little-endian
base-p encoding of the polynomial-basis coefficients, which is the wire form
used by every descriptor.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cache, cached_property

import galois
import numpy as np

from .errors import BadParameters, DegreeTooLarge, NonPrime, NotInSubfield, NotQuadraticTower, ZeroElement

logger = logging.getLogger(__name__)

MAX_FIELD_ORDER = 2**24


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """A certified finite field GF(p^m).

    ``modulus`` holds m+1 coefficients low-degree-first; ``primitive_element``
    is the integer rep of a generator of the multiplicative group.
    """

    p: int
    m: int
    modulus: tuple[int, ...]
    primitive_element: int
    GF: type = field(repr=False)

    @property
    def order(self) -> int:
        return self.p**self.m

    @property
    def is_tower(self) -> bool:
        return self.m % 2 == 0

    @property
    def q(self) -> int:
        """Size of the fixed subfield GF(q) inside GF(q²)."""
        if not self.is_tower:
            raise NotQuadraticTower(f"GF({self.p}^{self.m}) has odd degree")
        return self.p ** (self.m // 2)

    @property
    def descriptor(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    def __call__(self, value):
        return self.GF(value)

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    @cached_property
    def theta(self):
        return self.GF(self.primitive_element)

    @cached_property
    def log_table(self) -> np.ndarray:
        """Discrete logs of every nonzero element, indexed by rep."""
        table = np.full(self.order, -1, dtype=np.int64)
        nonzero = self.GF(np.arange(1, self.order))
        table[1:] = np.asarray(np.log(nonzero), dtype=np.int64)
        logger.debug("Built log table for GF(%d^%d)", self.p, self.m)
        return table

    @cached_property
    def subfield_elements(self):
        """Elements of GF(q) inside GF(q²), ascending by rep."""
        q = self.q
        elements = self.GF.elements
        return elements[elements**q == elements]

    @cached_property
    def tower_basis(self):
        """The fixed basis {1, α} of GF(q²) over GF(q); α is the polynomial variable."""
        alpha = self.GF(self.p)
        return self.GF(1), alpha


def _modulus_candidates(p: int, degree: int):
    # lexicographic over (c0, c1, ..., c_{m-1}) with c0 most significant; degree 1 yields x first
    for low_first in itertools.product(range(p), repeat=degree):
        yield low_first + (1,)


def _smallest_irreducible(p: int, degree: int) -> tuple[int, ...]:
    prime_field = galois.GF(p)
    for coeffs in _modulus_candidates(p, degree):
        poly = galois.Poly(list(reversed(coeffs)), field=prime_field)
        if poly.is_irreducible():
            return coeffs
    raise AssertionError(f"no irreducible polynomial of degree {degree} over GF({p})")


def _is_primitive(x, group_order: int, prime_divisors: list[int]) -> bool:
    if x == 0:
        return False
    return all(x ** (group_order // r) != 1 for r in prime_divisors)


@cache
def make_field(p: int, degree: int) -> FieldSpec:
    """Construct GF(p^degree) with the smallest irreducible modulus and smallest primitive element.

    Moduli are ordered lexicographically on (c0, ..., c_{m-1}), so a prime
    field always gets the modulus x, stored as (0, 1).
    """
    if not galois.is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if degree < 1:
        raise DegreeTooLarge(f"degree must be positive, got {degree}")
    if p**degree > MAX_FIELD_ORDER:
        raise DegreeTooLarge(f"{p}^{degree} exceeds the 2^24 element limit")

    modulus = _smallest_irreducible(p, degree)
    order = p**degree
    prime_divisors = list(galois.factors(order - 1)[0]) if order > 2 else []

    if degree == 1:
        scratch = galois.GF(p)
    else:
        poly = galois.Poly(list(reversed(modulus)), field=galois.GF(p))
        scratch = galois.GF(order, irreducible_poly=poly, verify=False)

    primitive = next(
        rep for rep in range(1, order) if _is_primitive(scratch(rep), order - 1, prime_divisors)
    )

    if degree == 1:
        GF = galois.GF(p, primitive_element=primitive)
    else:
        GF = galois.GF(order, irreducible_poly=poly, primitive_element=primitive)

    logger.debug("make_field(%d, %d): modulus=%s primitive=%d", p, degree, modulus, primitive)
    return FieldSpec(p=p, m=degree, modulus=modulus, primitive_element=primitive, GF=GF)


def make_tower(q: int) -> FieldSpec:
    """GF(q²) for a prime power q, with GF(q) as its fixed subfield."""
    if not galois.is_prime_power(q):
        raise NonPrime(f"{q} is not a prime power")
    primes, exponents = galois.factors(q)
    return make_field(int(primes[0]), 2 * int(exponents[0]))


def field_from_descriptor(descriptor: dict) -> FieldSpec:
    spec = make_field(descriptor["p"], descriptor["m"])
    if list(spec.modulus) != list(descriptor["modulus"]):
        raise BadParameters(
            f"descriptor modulus {descriptor['modulus']} differs from the canonical {list(spec.modulus)}"
        )
    return spec


def conj(x, spec: FieldSpec, e: int | None = None):
    """Frobenius conjugate x^q, or x^{p^e} when ``e`` is given."""
    if e is None:
        return x ** spec.q
    return x ** (spec.p**e)


def in_subfield(x, spec: FieldSpec):
    return x ** spec.q == x


def dlog(x, spec: FieldSpec) -> int:
    """Discrete log of x to the base of the certified primitive element."""
    rep = int(x)
    if rep == 0:
        raise ZeroElement("dlog of zero")
    return int(spec.log_table[rep])


def norm_root(lam, spec: FieldSpec):
    """Return ξ = θ^t with ξ^{q+1} = λ for t the smallest solution."""
    lam = spec(int(lam))
    if lam == 0:
        raise ZeroElement("norm_root of zero")
    if not in_subfield(lam, spec):
        raise NotInSubfield(f"{int(lam)} is not in GF({spec.q})")
    q = spec.q
    d = dlog(lam, spec)
    # subfield elements have logs divisible by q+1
    t = d // (q + 1)
    xi = spec.theta**t
    assert xi ** (q + 1) == lam
    return xi


def norm_roots(values, spec: FieldSpec):
    """Vectorized norm_root over an array of GF(q)* elements."""
    values = spec.GF(values)
    if np.any(values == 0):
        raise ZeroElement("norm_root of zero")
    if not np.all(values**spec.q == values):
        raise NotInSubfield("multiplier outside the subfield")
    logs = spec.log_table[np.asarray(values.view(np.ndarray), dtype=np.int64)]
    return spec.theta ** (logs // (spec.q + 1))


def power(x, exponent: int, spec: FieldSpec):
    """Field power with the convention 0^0 = 1 and support for negative exponents."""
    x = spec.GF(x)
    if exponent == 0:
        return spec.GF.Ones(x.shape)
    if exponent > 0:
        return x**exponent
    if np.any(x == 0):
        raise ZeroElement("negative power of zero")
    return np.reciprocal(x) ** (-exponent)


def is_prime_power(q: int) -> bool:
    return q > 1 and galois.is_prime_power(q)


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)
