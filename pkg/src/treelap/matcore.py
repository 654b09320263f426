"""Dense symmetric matrices, a cyclic Jacobi eigensolver and Perron vectors.

Matrices carry an ``exact`` flag: when every entry is an integer the data is
stored as ``int64`` so that sign tests downstream can be done without any
rounding. Everything numerical goes through :func:`eigh`, a cyclic Jacobi
solver compiled with numba.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit

_EPS = np.finfo(np.float64).eps
_INT_LIMIT = 2.0**53

DEFAULT_TOL = 1e-12
DEFAULT_MAX_SWEEPS = 100
DEFAULT_CLUSTER_TOL = 1e-8


class MatrixError(ValueError):
    """Raised for malformed matrix input (shape, symmetry, sign)."""


class ConvergenceError(RuntimeError):
    """Raised when the Jacobi iteration hits its sweep cap."""


class PerronError(RuntimeError):
    """Raised when no nonnegative vector is found in the top eigenspace."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Real symmetric n x n matrix.

    ``data`` is int64 when ``exact`` is set, float64 otherwise. Build it with
    :func:`sym_from_entries` rather than directly.
    """

    data: np.ndarray
    exact: bool

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def scale(self) -> float:
        """Largest absolute entry (0 for the zero matrix)."""
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0

    def as_float(self) -> np.ndarray:
        return self.data.astype(np.float64)

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self.exact == other.exact and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.exact, self.data.tobytes()))

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        return f"SymMatrix(n={self.n}, {kind}, data={self.data.tolist()!r})"


def _is_integral(a: np.ndarray) -> bool:
    if np.issubdtype(a.dtype, np.integer):
        return True
    if not np.all(np.isfinite(a)):
        return False
    return bool(np.all(a == np.round(a)) and np.all(np.abs(a) < _INT_LIMIT))


def sym_from_entries(entries, n: int | None = None) -> SymMatrix:
    """Validate and symmetrize ``entries`` into a :class:`SymMatrix`.

    Small asymmetries (up to 1e-12 relative to the largest entry) are removed
    by averaging ``a_ij`` and ``a_ji``; anything larger is rejected.
    """
    a = np.array(entries)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise MatrixError(f"expected a non-empty square matrix, got shape {a.shape}")
    if n is not None and a.shape[0] != n:
        raise MatrixError(f"dimension mismatch: n={n} but entries are {a.shape}")
    if not (np.issubdtype(a.dtype, np.integer) or np.issubdtype(a.dtype, np.floating)):
        a = a.astype(np.float64)

    if np.issubdtype(a.dtype, np.integer):
        if not np.array_equal(a, a.T):
            i, j = np.argwhere(a != a.T)[0]
            raise MatrixError(f"integer matrix is not symmetric at ({i + 1}, {j + 1})")
        return SymMatrix(_readonly(a.astype(np.int64)), True)

    a = a.astype(np.float64)
    if not np.all(np.isfinite(a)):
        raise MatrixError("matrix has non-finite entries")
    scale = float(np.max(np.abs(a)))
    asym = float(np.max(np.abs(a - a.T)))
    # a few ulps of slack so that a gap of exactly 1e-12 is not rejected by rounding
    if asym > (1e-12 + 16 * _EPS) * scale:
        raise MatrixError(f"asymmetry {asym:.3e} exceeds 1e-12 x scale ({scale:.3e})")
    a = 0.5 * (a + a.T)
    if _is_integral(a):
        return SymMatrix(_readonly(a.astype(np.int64)), True)
    return SymMatrix(_readonly(a), False)


def load_matrix_csv(path) -> SymMatrix:
    """Read a matrix from CSV, one row per line.

    The result is exact only when every token parses as an integer literal.
    """
    rows = []
    all_int = True
    with open(Path(path), newline="") as fh:
        for line_no, row in enumerate(csv.reader(fh), start=1):
            tokens = [tok.strip() for tok in row if tok.strip()]
            if not tokens:
                continue
            parsed = []
            for tok in tokens:
                try:
                    parsed.append(int(tok))
                except ValueError:
                    all_int = False
                    try:
                        parsed.append(float(tok))
                    except ValueError:
                        raise MatrixError(f"{path}:{line_no}: cannot parse {tok!r}") from None
            rows.append(parsed)
    if not rows or any(len(r) != len(rows) for r in rows):
        raise MatrixError(f"{path}: matrix must be square and non-empty")
    if all_int:
        return sym_from_entries(np.array(rows, dtype=np.int64))
    m = sym_from_entries(np.array(rows, dtype=np.float64))
    if m.exact:
        # decimal tokens such as "2.0": keep the float representation
        return SymMatrix(_readonly(m.data.astype(np.float64)), False)
    return m


def write_matrix_csv(a: SymMatrix, path) -> None:
    with open(Path(path), "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in a.data.tolist():
            writer.writerow([repr(x) if isinstance(x, float) else x for x in row])


# ---------------------------------------------------------------------------
# Jacobi kernel
# ---------------------------------------------------------------------------

@njit(cache=True)
def _jacobi_kernel(a, v, tol, max_sweeps):
    n = a.shape[0]
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j] * a[i, j]
    fro = math.sqrt(fro)
    eps = 2.220446049250313e-16
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j] * a[i, j]
        if math.sqrt(off) <= tol * fro:
            return sweep, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                # negligible against both diagonal entries: annihilate without rotating
                if abs(apq) < eps * abs(app) * 1e-2 and abs(apq) < eps * abs(aqq) * 1e-2:
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return max_sweeps, False


@dataclass(frozen=True, eq=False)
class EigenDecomp:
    """Sorted eigenvalues, orthonormal eigenvectors (columns) and clusters."""

    values: np.ndarray
    vectors: np.ndarray
    clusters: tuple
    residual: float
    sweeps: int

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def cluster_of(self, index: int) -> tuple:
        """Cluster (tuple of indices) that contains eigenvalue ``index``."""
        if index < 0:
            index += self.n
        for cl in self.clusters:
            if index in cl:
                return cl
        raise IndexError(index)

    def basis(self, cluster) -> np.ndarray:
        """Eigenvectors of a cluster as the columns of an n x d array."""
        return self.vectors[:, list(cluster)]


def fix_sign(x: np.ndarray) -> np.ndarray:
    """Flip ``x`` so that its largest-magnitude component is nonnegative.

    Components within a relative 1e-9 of the maximum count as tied and the
    lowest index wins.
    """
    mags = np.abs(x)
    top = mags.max() if mags.size else 0.0
    if top == 0.0:
        return x
    k = int(np.flatnonzero(mags >= top * (1.0 - 1e-9))[0])
    return -x if x[k] < 0 else x


def clusters_from_values(values: np.ndarray, threshold: float) -> tuple:
    """Group sorted values into maximal runs with consecutive gaps <= threshold."""
    groups = []
    current = [0]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] <= threshold:
            current.append(i)
        else:
            groups.append(tuple(current))
            current = [i]
    groups.append(tuple(current))
    return tuple(groups)


def _as_array(A) -> np.ndarray:
    if isinstance(A, SymMatrix):
        return A.as_float()
    return np.asarray(A, dtype=np.float64)


def eigh(A, tol: float = DEFAULT_TOL, max_sweeps: int = DEFAULT_MAX_SWEEPS,
         cluster_tol: float = DEFAULT_CLUSTER_TOL) -> EigenDecomp:
    """Full symmetric eigendecomposition by cyclic Jacobi rotations.

    Sweeps continue until the off-diagonal Frobenius norm drops below
    ``tol * ||A||_F``. Eigenvectors are sign-fixed with :func:`fix_sign`,
    values are sorted ascending, and neighbouring values closer than
    ``cluster_tol * max(1, ||A||_inf)`` are grouped into clusters.

    Raises :class:`ConvergenceError` if ``max_sweeps`` is exhausted.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = np.array(_as_array(A), dtype=np.float64, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise MatrixError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    original = a.copy()
    v = np.eye(n)
    sweeps, ok = _jacobi_kernel(a, v, tol, max_sweeps)
    if not ok:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (n={n})")

    d = np.diag(a).copy()
    order = np.argsort(d, kind="stable")
    values = d[order]
    vectors = v[:, order]
    for k in range(n):
        vectors[:, k] = fix_sign(vectors[:, k])

    inf_norm = float(np.max(np.sum(np.abs(original), axis=1))) if n else 0.0
    clusters = clusters_from_values(values, cluster_tol * max(1.0, inf_norm))
    residual = float(np.max(np.abs(original @ vectors - vectors * values))) if n else 0.0
    return EigenDecomp(_readonly(values), _readonly(vectors), clusters, residual, int(sweeps))


def _nonneg_screen(x: np.ndarray) -> np.ndarray | None:
    if x.sum() < 0:
        x = -x
    top = np.max(np.abs(x))
    if top == 0.0:
        return None
    if np.all(x >= -1e-10 * top):
        return x / np.linalg.norm(x)
    return None


def top_cluster_nonnegative(basis: np.ndarray) -> np.ndarray | None:
    """Find an entrywise nonnegative unit vector in span(``basis``).

    Each basis column is screened first. If none passes, the orthogonal
    projector onto the span is applied to the all-ones vector and then to each
    coordinate vector. For a top eigenspace of a matrix with nonnegative
    off-diagonal these projections are limits of nonnegative power iterates,
    so they are nonnegative whenever they are nonzero.
    """
    for k in range(basis.shape[1]):
        x = _nonneg_screen(basis[:, k])
        if x is not None:
            return x
    if basis.shape[1] == 1:
        return None
    n = basis.shape[0]
    starts = [np.ones(n)] + [np.eye(n)[i] for i in range(n)]
    for s in starts:
        x = basis @ (basis.T @ s)
        if np.linalg.norm(x) <= 1e-8 * np.linalg.norm(s):
            continue
        x = _nonneg_screen(x)
        if x is not None:
            return x
    return None


def perron_vector(A, decomp: EigenDecomp | None = None) -> np.ndarray:
    """Nonnegative unit eigenvector for the largest eigenvalue of ``A``.

    ``A`` must have nonnegative off-diagonal entries. The returned vector has
    nonnegative component sum and no component below ``-1e-10 * ||x||_inf``.
    """
    a = _as_array(A)
    off = a - np.diag(np.diag(a))
    if np.any(off < 0):
        i, j = np.argwhere(off < 0)[0]
        raise MatrixError(f"negative off-diagonal entry at ({i + 1}, {j + 1})")
    if decomp is None:
        decomp = eigh(A)
    cluster = decomp.cluster_of(decomp.n - 1)
    x = top_cluster_nonnegative(decomp.basis(cluster))
    if x is None:
        raise PerronError(f"no nonnegative vector in top cluster of size {len(cluster)}")
    return x
