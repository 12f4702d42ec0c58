"""Dense exact linear algebra over finite fields.

Matrices are 2-D ``galois.FieldArray`` instances. Reduction uses Gauss-Jordan
with first-nonzero pivoting, so every result is deterministic.
"""

import logging

import numpy as np

from .errors import BadExponent, NotQuadraticTower
from .field import FieldSpec

logger = logging.getLogger(__name__)

MINOR_CHUNK = 50_000


def rref(M):
    """Reduced row echelon form, pivot columns and rank."""
    if M.size == 0:
        return M.copy(), (), 0
    R = M.row_reduce()
    pivots = []
    for row in R:
        nonzero = np.flatnonzero(row.view(np.ndarray))
        if nonzero.size == 0:
            break
        pivots.append(int(nonzero[0]))
    return R, tuple(pivots), len(pivots)


def rank(M) -> int:
    if M.size == 0:
        return 0
    return rref(M)[2]


def dagger(M, spec: FieldSpec):
    """Conjugate transpose (M†)_{ij} = M_{ji}^q over a quadratic tower."""
    if not spec.is_tower:
        raise NotQuadraticTower(f"GF({spec.p}^{spec.m}) is not a quadratic tower")
    return M.T ** spec.q


def galois_dagger(M, e: int, spec: FieldSpec):
    """(M‡)_{ij} = M_{ji}^{p^{m-e}}."""
    if not 0 <= e < spec.m:
        raise BadExponent(f"e must lie in [0, {spec.m}), got {e}")
    return M.T ** (spec.p ** (spec.m - e))


def kernel(M):
    """Basis of the right kernel {x : M x = 0}, one vector per row."""
    if M.shape[0] == 0:
        return type(M).Identity(M.shape[1])
    return M.null_space()


def left_kernel(M):
    """Basis of {x : x M = 0}, one vector per row."""
    return kernel(M.T)


def stacked_rank(A, B) -> int:
    if A.shape[0] == 0:
        return rank(B)
    if B.shape[0] == 0:
        return rank(A)
    return rank(np.concatenate((A, B), axis=0))


def same_rowspace(A, B) -> bool:
    """Rowspace equality by mutual rank."""
    r = stacked_rank(A, B)
    return r == rank(A) == rank(B)


def intersection_dim(A, B) -> int:
    """dim(rowspace(A) ∩ rowspace(B))."""
    return rank(A) + rank(B) - stacked_rank(A, B)


def batched_nonsingular(stack):
    """Nonsingularity of every square matrix in a (batch, k, k) stack.

    Gauss elimination runs on the whole batch at once; a matrix is singular as
    soon as one of its columns has no pivot left.
    """
    A = stack.copy()
    batch, k, _ = A.shape
    ok = np.ones(batch, dtype=bool)
    index = np.arange(batch)
    GF = type(A)
    for col in range(k):
        below = A[:, col:, col].view(np.ndarray) != 0
        has_pivot = below.any(axis=1)
        ok &= has_pivot
        pivot_rows = col + np.argmax(below, axis=1)

        current = A[index, col, :].copy()
        A[index, col, :] = A[index, pivot_rows, :]
        A[index, pivot_rows, :] = current

        pivots = A[index, col, col].copy()
        pivots[~has_pivot] = 1
        A[:, col, :] *= np.reciprocal(pivots)[:, np.newaxis]

        if col + 1 < k:
            factors = A[:, col + 1 :, col].copy()
            A[:, col + 1 :, :] -= factors[:, :, np.newaxis] * A[:, col : col + 1, :]
    logger.debug("batched_nonsingular: %d of %d nonsingular", int(ok.sum()), batch)
    return ok if batch else np.ones(0, dtype=bool)


def all_minors_nonsingular(G, column_sets: np.ndarray, chunk: int = MINOR_CHUNK):
    """Check every k×k minor G[:, cols]; returns the first singular column set or None."""
    for start in range(0, len(column_sets), chunk):
        cols = column_sets[start : start + chunk]
        stack = np.moveaxis(G[:, cols], 1, 0)
        ok = batched_nonsingular(stack)
        if not ok.all():
            return tuple(int(c) for c in cols[int(np.argmin(ok))])
    return None


def as_ints(M) -> list:
    """Integer-rep form of a field array, for serialization."""
    return M.view(np.ndarray).astype(np.int64).tolist()
