"""Generalized Laplacians and the difference/summation compression.

For a symmetric ``A`` the generalized Laplacian ``A^L`` has off-diagonal
``-a_ij`` and diagonal ``sum_{j != i} a_ij``. With the difference operator
``S`` ((n-1) x n) and the summation operator ``T`` (n x (n-1)) one has
``S T = I`` and ``T S = I - 1 e_1'``, and ``M = S A^L T`` carries the
spectrum of ``A^L`` minus one zero.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .matcore import SymMatrix, sym_from_entries


@dataclass(frozen=True, eq=False)
class GeneralizedLaplacian:
    base: SymMatrix
    matrix: SymMatrix

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def exact(self) -> bool:
        return self.matrix.exact


def ones(n: int) -> np.ndarray:
    return np.ones(n, dtype=np.int64)


def e1(n: int) -> np.ndarray:
    e = np.zeros(n, dtype=np.int64)
    e[0] = 1
    return e


def laplacian_of(A: SymMatrix) -> GeneralizedLaplacian:
    """``A^L``; the diagonal of ``A`` plays no role."""
    a = A.data.copy()
    np.fill_diagonal(a, 0)
    lap = -a
    np.fill_diagonal(lap, a.sum(axis=1))
    lap.setflags(write=False)
    return GeneralizedLaplacian(A, SymMatrix(lap, A.exact))


def distance_laplacian(t) -> GeneralizedLaplacian:
    from .treegraph import distance_matrix

    return laplacian_of(distance_matrix(t))


def build_S(n: int) -> np.ndarray:
    """(n-1) x n difference matrix with rows (..., -1, 1, ...)."""
    if n < 2:
        raise ValueError("S needs n >= 2")
    s = np.zeros((n - 1, n), dtype=np.int64)
    idx = np.arange(n - 1)
    s[idx, idx] = -1
    s[idx, idx + 1] = 1
    return s


def build_T(n: int) -> np.ndarray:
    """n x (n-1) summation matrix: zero first row, lower-triangular ones below."""
    if n < 2:
        raise ValueError("T needs n >= 2")
    return np.tril(np.ones((n, n - 1), dtype=np.int64), k=-1)


def compress(L: GeneralizedLaplacian) -> np.ndarray:
    """``M = S A^L T`` as a general (nonsymmetric) square array.

    Integer dtype when ``A`` is exact. Computed without forming S and T:
    ``(A^L T)_{kj} = sum_{l > j} L_{kl}`` is a reversed cumulative sum, and
    left-multiplying by S takes consecutive row differences.
    """
    lap = L.matrix.data
    n = lap.shape[0]
    if n < 2:
        raise ValueError("compression needs n >= 2")
    tail = np.cumsum(lap[:, ::-1], axis=1)[:, ::-1]
    lt = tail[:, 1:]
    return lt[1:] - lt[:-1]


def compress_vector(y) -> np.ndarray:
    """``S y``: consecutive differences."""
    y = np.asarray(y)
    if y.shape[0] < 2:
        raise ValueError("need a vector of length >= 2")
    return np.diff(y)


def lift_vector(y) -> np.ndarray:
    """Mean-free ``x`` with ``S x = y``: prefix sums with a leading zero, centered."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape[0] < 1:
        raise ValueError("need a vector of length >= 1")
    x = np.concatenate(([0.0], np.cumsum(y)))
    return x - x.mean()


class SignClass(enum.Enum):
    ALL_POSITIVE = "AllPositive"
    ALL_NEGATIVE = "AllNegative"
    ALL_NONNEG = "AllNonneg"
    ALL_NONPOS = "AllNonpos"
    MIXED = "Mixed"

    def implies(self, other: "SignClass") -> bool:
        """Whether this (stronger) class also satisfies ``other``."""
        if self is other:
            return True
        return (self, other) in {
            (SignClass.ALL_POSITIVE, SignClass.ALL_NONNEG),
            (SignClass.ALL_NEGATIVE, SignClass.ALL_NONPOS),
        }


@dataclass(frozen=True)
class SignPattern:
    classification: SignClass
    witness: tuple | None = None
    vacuous: bool = False
    all_zero: bool = False

    def satisfies(self, expected: SignClass) -> bool:
        """True if every off-diagonal entry meets ``expected``.

        A 1 x 1 matrix satisfies everything; an all-zero off-diagonal
        satisfies both weak classes.
        """
        if self.vacuous:
            return True
        if self.all_zero and expected in (SignClass.ALL_NONNEG, SignClass.ALL_NONPOS):
            return True
        return self.classification.implies(expected)


def sign_pattern(M) -> SignPattern:
    """Classify the off-diagonal entries of a square matrix by sign.

    Integer input is compared exactly. Float entries with
    ``|m| <= 1e-12 * max|M|`` count as zero. The Mixed witness is the first
    (row-major, 1-based) off-diagonal entry whose sign disagrees with the
    first nonzero one. A matrix whose off-diagonal is entirely zero is
    reported as AllNonneg; a 1 x 1 matrix is additionally flagged vacuous.
    """
    m = np.asarray(M)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    k = m.shape[0]
    off_mask = ~np.eye(k, dtype=bool)
    if np.issubdtype(m.dtype, np.integer):
        sgn = np.sign(m).astype(np.int64)
    else:
        thr = 1e-12 * (float(np.max(np.abs(m))) if m.size else 0.0)
        sgn = np.where(m > thr, 1, np.where(m < -thr, -1, 0))
    sgn = np.where(off_mask, sgn, 0)
    off_vals = sgn[off_mask]
    has_pos = bool(np.any(off_vals > 0))
    has_neg = bool(np.any(off_vals < 0))
    has_zero = bool(np.any(off_vals == 0))
    if has_pos and has_neg:
        flat = np.flatnonzero(sgn)
        first = sgn.flat[flat[0]]
        w = flat[np.flatnonzero(sgn.flat[flat] != first)[0]]
        i, j = divmod(int(w), k)
        return SignPattern(SignClass.MIXED, (i + 1, j + 1))
    if has_pos:
        return SignPattern(SignClass.ALL_NONNEG if has_zero else SignClass.ALL_POSITIVE)
    if has_neg:
        return SignPattern(SignClass.ALL_NONPOS if has_zero else SignClass.ALL_NEGATIVE)
    return SignPattern(SignClass.ALL_NONNEG, vacuous=k < 2, all_zero=True)


def as_sym(a) -> SymMatrix:
    return a if isinstance(a, SymMatrix) else sym_from_entries(a)
