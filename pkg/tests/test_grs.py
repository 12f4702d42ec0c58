"""
GRS codes: generators, Gram matrices, hulls, duals and distance certificates.
"""

import numpy as np
import pytest

from codes import linalg
from codes.errors import (
    BadParameters,
    BadPosition,
    InnerProductMismatch,
    ModeInfeasible,
    NegativePowerWithZeroPoint,
    ZeroScale,
)
from codes.grs import (
    EUCLIDEAN,
    HERMITIAN,
    GrsCode,
    InnerProduct,
    LinearCode,
    affine_reparam,
    code_from_descriptor,
    dual,
    dual_generator,
    gram,
    hermitian_dual,
    hull_basis,
    hull_dim,
    hull_dim_direct,
    min_distance,
    scale_coordinate,
)
from services.verify_service import random_grs_code


def plain_code(spec, n: int, k: int) -> GrsCode:
    return GrsCode(spec=spec, a=tuple(range(1, n + 1)), v=(1,) * n, k=k)


@pytest.mark.unit
class TestGrsCode:
    """Construction and validation."""

    def test_generator_rows_are_weighted_powers(self, gf9):
        """Row i is (v_j a_j^i)."""
        code = GrsCode(spec=gf9, a=(1, 2, 3, 4), v=(1, 2, 1, 2), k=2)
        G = code.generator
        a, v = gf9.GF([1, 2, 3, 4]), gf9.GF([1, 2, 1, 2])
        assert G.shape == (2, 4)
        assert np.all(G[1] == v * a)

    def test_extended_code_has_infinity_column(self, gf9):
        """The ∞ coordinate is 1 on the last row only."""
        code = GrsCode(spec=gf9, a=(0, 1, 2), v=(1, 1, 1), k=2, extended=True)
        assert code.length == 4
        assert code.generator[:, -1].tolist() == [0, 1]

    def test_validation(self, gf9):
        """Duplicate points, zero multipliers and bad dimensions are rejected."""
        with pytest.raises(BadParameters):
            GrsCode(spec=gf9, a=(1, 1), v=(1, 1), k=1)
        with pytest.raises(BadParameters):
            GrsCode(spec=gf9, a=(1, 2), v=(1, 0), k=1)
        with pytest.raises(BadParameters):
            GrsCode(spec=gf9, a=(1, 2), v=(1, 1), k=3)
        with pytest.raises(NegativePowerWithZeroPoint):
            GrsCode(spec=gf9, a=(0, 1, 2), v=(1, 1, 1), k=1, k1=-1)

    def test_descriptor_round_trip(self, full_field_q3):
        """A descriptor rebuilds the same generator."""
        rebuilt = code_from_descriptor(full_field_q3.descriptor)
        assert np.all(rebuilt.generator == full_field_q3.generator)

    def test_inner_product_tags(self):
        """Tags parse back to the same inner product."""
        assert InnerProduct.parse("galois(1)") == InnerProduct.galois(1)
        assert InnerProduct.parse("hermitian") == HERMITIAN
        with pytest.raises(BadParameters):
            InnerProduct.parse("symplectic")


@pytest.mark.unit
class TestHulls:
    """Gram rank against direct subspace intersection."""

    def test_full_field_gram_pattern(self, full_field_q4):
        """Only the (q−1, q−1) Gram entry survives and the hull is q−1."""
        M = gram(full_field_q4)
        assert M[3, 3] != 0
        assert int(np.count_nonzero(M.view(np.ndarray))) == 1
        assert hull_dim(full_field_q4).hull_dim == 3

    @pytest.mark.parametrize("inner", [EUCLIDEAN, HERMITIAN, InnerProduct.galois(1)])
    def test_gram_rank_matches_intersection(self, gf16, inner):
        """k − rank(Gram) equals dim(C ∩ C^⊥) on random codes."""
        rng = np.random.default_rng(2024)
        for _ in range(15):
            code = random_grs_code(gf16, rng)
            assert hull_dim(code, inner).hull_dim == hull_dim_direct(code, inner)

    def test_hermitian_dual_is_orthogonal(self, full_field_q3):
        """The Hermitian dual has dimension n−k and pairs to zero with the code."""
        D = hermitian_dual(full_field_q3)
        q = full_field_q3.spec.q
        assert D.k == full_field_q3.n - full_field_q3.k
        assert np.all(full_field_q3.generator**q @ D.generator.T == 0)

    @pytest.mark.parametrize("tower", ["gf9", "gf16"])
    def test_parity_check_gram_rank(self, tower, request):
        """rank(H·H†) = n − k − l for the parity-check matrix H."""
        spec = request.getfixturevalue(tower)
        rng = np.random.default_rng(99)
        for _ in range(15):
            code = random_grs_code(spec, rng)
            H = dual_generator(code)
            hull = hull_dim(code).hull_dim
            assert linalg.rank(H @ linalg.dagger(H, spec)) == code.n - code.k - hull
            assert hull_dim(hermitian_dual(code)).hull_dim == hull

    @pytest.mark.parametrize("inner", [EUCLIDEAN, HERMITIAN])
    def test_double_dual_is_the_code(self, gf16, inner):
        """(C^⊥)^⊥ spans the same rows as C."""
        rng = np.random.default_rng(8)
        for _ in range(15):
            code = random_grs_code(gf16, rng)
            twice = dual(dual(code, inner), inner)
            assert twice.k == code.k
            assert linalg.same_rowspace(twice.generator, code.generator)

    def test_hermitian_double_dual(self, full_field_q3):
        """hermitian_dual applied twice returns the full-field code."""
        twice = hermitian_dual(hermitian_dual(full_field_q3))
        assert linalg.same_rowspace(twice.generator, full_field_q3.generator)

    def test_hull_basis_spans_the_hull(self, full_field_q4):
        """The hull basis has the hull's dimension and lies in the code."""
        B = hull_basis(full_field_q4)
        assert linalg.rank(B) == 3
        assert linalg.intersection_dim(B, full_field_q4.generator) == 3

    def test_galois_exponent_out_of_range(self, gf9):
        """e must be below the extension degree."""
        with pytest.raises(InnerProductMismatch):
            hull_dim(plain_code(gf9, 4, 2), InnerProduct.galois(2))


@pytest.mark.unit
class TestMinDistance:
    """Distance certificates."""

    def test_exhaustive_is_singleton(self, gf9):
        """A [8, 3] GRS code over GF(9) has distance 6."""
        cert = min_distance(plain_code(gf9, 8, 3), "exhaustive")
        assert cert.d == 6
        assert cert.is_mds

    def test_minor_certificate(self, gf9):
        """All C(8,3) minors of a GRS generator are nonsingular."""
        cert = min_distance(plain_code(gf9, 8, 3), "minor-certificate")
        assert cert.is_mds
        assert cert.d == 6

    def test_non_mds_code(self, gf9):
        """A repeated column is caught by both certificates."""
        code = LinearCode(gf9, gf9.GF([[1, 1, 0], [0, 0, 1]]))
        assert not min_distance(code, "minor-certificate").is_mds
        assert min_distance(code, "exhaustive").d == 1

    def test_limits(self, gf9):
        """Searches above their limits are infeasible."""
        code = plain_code(gf9, 8, 3)
        with pytest.raises(ModeInfeasible):
            min_distance(code, "exhaustive", max_exhaustive=10)
        with pytest.raises(ModeInfeasible):
            min_distance(code, "minor-certificate", max_minors=10)
        with pytest.raises(ModeInfeasible):
            min_distance(LinearCode(gf9, gf9.GF([[1, 1]])), "structural")

    def test_auto_falls_back_to_structure(self, full_field_q4):
        """With both limits exhausted a GRS code is certified by construction."""
        cert = min_distance(full_field_q4, "auto", max_minors=1, max_exhaustive=1)
        assert cert.mode == "structural"
        assert cert.d == 13


@pytest.mark.unit
class TestReparametrization:
    """Affine changes of presentation and coordinate scaling."""

    def test_affine_reparam_keeps_the_code(self, gf9):
        """αa + b with multipliers μv spans the same rowspace."""
        code = plain_code(gf9, 6, 3)
        moved = affine_reparam(code, gf9.theta, 7, 2)
        assert linalg.same_rowspace(code.generator, moved.generator)
        assert moved.provenance[-1].startswith("affine(")

    def test_affine_reparam_on_extended_code(self, gf9):
        """Extended codes keep their rowspace with μ = 1 and refuse other μ."""
        code = GrsCode(spec=gf9, a=(1, 2, 3, 4), v=(1, 1, 1, 1), k=2, extended=True)
        moved = affine_reparam(code, gf9.theta, 1, 1)
        assert linalg.same_rowspace(code.generator, moved.generator)
        with pytest.raises(BadParameters):
            affine_reparam(code, 1, 0, 2)

    def test_scale_coordinate(self, full_field_q3):
        """Scaling changes one multiplier and keeps the dimension."""
        scaled = scale_coordinate(full_field_q3, 2, 5)
        assert isinstance(scaled, GrsCode)
        gf = full_field_q3.spec.GF
        assert scaled.v[2] == int(gf(5) * gf(full_field_q3.v[2]))
        assert scaled.k == full_field_q3.k
        with pytest.raises(ZeroScale):
            scale_coordinate(full_field_q3, 0, 0)
        with pytest.raises(BadPosition):
            scale_coordinate(full_field_q3, 9, 1)
