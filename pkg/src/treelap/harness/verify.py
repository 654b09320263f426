"""Verification suites for the compression identities and the monotone-eigenvector results."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import mpmath
import numpy as np

from ..fiedlerclass import Monotone, is_monotone
from ..lapxform import (SignClass, build_S, build_T, compress, compress_vector,
                        laplacian_of, lift_vector, sign_pattern)
from ..matcore import SymMatrix, eigh, sym_from_entries
from ..monocond import ConditionKind, Kind, check_condition, gen_condition_matrix
from ..treegraph import distance_matrix, make_rng, path_graph
from .status import Status

COMPANION_MAX_N = 12


# ---------------------------------------------------------------------------
# S T = I and T S = I - 1 e1'
# ---------------------------------------------------------------------------

def verify_lemma7(n_max: int) -> dict:
    """Exact integer check of both identities for every 2 <= n <= n_max."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    out = {}
    for n in range(2, n_max + 1):
        S, T = build_S(n), build_T(n)
        one_e1 = np.zeros((n, n), dtype=np.int64)
        one_e1[:, 0] = 1
        st = np.array_equal(S @ T, np.eye(n - 1, dtype=np.int64))
        ts = np.array_equal(T @ S, np.eye(n, dtype=np.int64) - one_e1)
        out[n] = st and ts
    return out


# ---------------------------------------------------------------------------
# spectrum and eigenvectors of M = S A^L T
# ---------------------------------------------------------------------------

def charpoly_int(M: np.ndarray) -> list:
    """Characteristic polynomial det(xI - M) of an integer matrix, exactly.

    Faddeev-LeVerrier in Python integers; coefficients highest degree first.
    """
    m = [[int(x) for x in row] for row in np.asarray(M).tolist()]
    k = len(m)
    coeffs = [1]
    prod = [[0] * k for _ in range(k)]  # M * N_{j-1}, with N_0 = 0
    c = 1
    for j in range(1, k + 1):
        # N_j = M N_{j-1} + c_{j-1} I
        nj = [[prod[r][s] + (c if r == s else 0) for s in range(k)] for r in range(k)]
        prod = [[sum(m[r][t] * nj[t][s] for t in range(k)) for s in range(k)] for r in range(k)]
        trace = sum(prod[r][r] for r in range(k))
        c_frac = Fraction(-trace, j)
        if c_frac.denominator != 1:
            raise ArithmeticError("non-integer characteristic coefficient")
        c = int(c_frac)
        coeffs.append(c)
    return coeffs


def companion_spectrum(M: np.ndarray) -> np.ndarray:
    """Eigenvalues of an integer matrix from its exact characteristic polynomial."""
    coeffs = charpoly_int(M)
    with mpmath.workdps(60):
        roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=400)
        vals = [complex(r) for r in roots]
    vals = np.array(vals)
    return vals


def _null_vector(B: np.ndarray) -> np.ndarray:
    _, _, vt = np.linalg.svd(B)
    return vt[-1]


@dataclass
class Lemma8Report:
    n: int
    spectrum_error: float
    spectrum_route: str
    compress_residual: float
    lift_residual: float
    lift_orthogonality: float
    charpoly_identity: bool | None
    imag_max: float
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _perp_basis(X: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(X) intersected with the complement of the ones vector."""
    n = X.shape[0]
    P = np.eye(n) - 1.0 / n
    u, s, _ = np.linalg.svd(P @ X, full_matrices=False)
    return u[:, s > 1e-8]


def verify_lemma8(A: SymMatrix, rel_tol: float = 1e-8, res_tol: float = 1e-8,
                  orth_tol: float = 1e-10) -> Lemma8Report:
    """Compare the spectrum and eigenvectors of ``M = S A^L T`` with those of ``A^L``.

    ``M`` is nonsymmetric. Its spectrum is computed independently of the
    Jacobi route: from the exact integer characteristic polynomial when
    ``A`` is exact and ``n - 1 <= 12``, else with LAPACK's general solver.
    """
    L = laplacian_of(A)
    n = A.n
    lap = L.matrix.as_float()
    Mx = compress(L)
    M = Mx.astype(np.float64)
    dec = eigh(L.matrix)
    lam = dec.values
    mat_scale = max(1.0, float(np.max(np.abs(lam))))

    charpoly_ok = None
    route = "lapack-general"
    if L.exact and n - 1 <= COMPANION_MAX_N:
        # det(xI - A^L) = x det(xI - M)
        charpoly_ok = charpoly_int(L.matrix.data) == charpoly_int(Mx) + [0]
        try:
            mu = companion_spectrum(Mx)
            route = "charpoly"
        except mpmath.libmp.NoConvergence:
            pass
    if route != "charpoly":
        route = "lapack-general"
        mu = np.linalg.eigvals(M)
    imag_max = float(np.max(np.abs(mu.imag))) if mu.size else 0.0
    mu_sorted = np.sort(mu.real)
    # drop the zero closest to the origin from the Laplacian spectrum
    drop = int(np.argmin(np.abs(lam)))
    rest = np.sort(np.delete(lam, drop))
    spec_err = float(np.max(np.abs(mu_sorted - rest))) / mat_scale if rest.size else 0.0

    # eigenvectors of A^L orthogonal to ones -> S y is an eigenvector of M
    m_scale = max(1.0, float(np.max(np.sum(np.abs(M), axis=1))))
    comp_res = 0.0
    for cl in dec.clusters:
        X = _perp_basis(dec.basis(cl))
        for k in range(X.shape[1]):
            y = X[:, k]
            alpha = float(y @ lap @ y)
            sy = compress_vector(y)
            comp_res = max(comp_res, float(np.max(np.abs(M @ sy - alpha * sy))) / m_scale)

    # eigenvectors of M -> lifted vectors are eigenvectors of A^L
    l_scale = max(1.0, float(np.max(np.sum(np.abs(lap), axis=1))))
    if route == "charpoly":
        pairs = [(float(z.real), _null_vector(M - z.real * np.eye(n - 1))) for z in mu]
    else:
        w, V = np.linalg.eig(M)
        pairs = [(float(w[k].real), V[:, k].real) for k in range(n - 1)]
    lift_res = 0.0
    orth = 0.0
    for alpha, y in pairs:
        if np.max(np.abs(y)) == 0:
            continue
        x = lift_vector(y)
        if not np.allclose(compress_vector(x), y, rtol=0, atol=1e-12 * float(np.max(np.abs(y)))):
            lift_res = math.inf
        x = x / np.max(np.abs(x))
        lift_res = max(lift_res, float(np.max(np.abs(lap @ x - alpha * x))) / l_scale)
        orth = max(orth, abs(float(x.sum())) / float(np.linalg.norm(x)))

    checks = {
        "spectrum": spec_err <= rel_tol and imag_max <= rel_tol * mat_scale,
        "compress": comp_res <= res_tol,
        "lift": lift_res <= res_tol,
        "orthogonal": orth <= orth_tol,
    }
    if charpoly_ok is not None:
        checks["charpoly_identity"] = charpoly_ok
    return Lemma8Report(n, spec_err, route, comp_res, lift_res, orth, charpoly_ok, imag_max, checks)


def random_symmetric_int(n: int, seed: int, low: int = -10, high: int = 10) -> SymMatrix:
    rng = make_rng(seed, n)
    a = rng.integers(low, high + 1, size=(n, n))
    a = np.triu(a) + np.triu(a, 1).T
    return sym_from_entries(a.astype(np.int64))


def lemma8_suite(count: int = 100, n_max: int = 40, seed: int = 0) -> list:
    rng = make_rng(seed, 8)
    sizes = rng.integers(2, n_max + 1, size=count)
    return [verify_lemma8(random_symmetric_int(int(n), seed * 1_000_003 + i))
            for i, n in enumerate(sizes)]


# ---------------------------------------------------------------------------
# sign patterns of M
# ---------------------------------------------------------------------------

_PREDICTED = {
    (Kind.PATH_I, False): SignClass.ALL_NONNEG,
    (Kind.PATH_I, True): SignClass.ALL_POSITIVE,
    (Kind.PATH_II, False): SignClass.ALL_NONPOS,
    (Kind.PATH_II, True): SignClass.ALL_NEGATIVE,
}


def predicted_sign(cond: ConditionKind) -> SignClass:
    return _PREDICTED[(cond.kind, cond.strict)]


def sign_suite(per_kind: int = 100, n_max: int = 30, seed: int = 0) -> dict:
    """Generated matrices for each path condition (weak and strict) and their M sign class.

    Returns ``{condition: [(n, family, observed, matched), ...]}``; ``observed``
    is ``"AllZero"`` when every off-diagonal entry vanishes.
    """
    out = {}
    for kind, strict in product((Kind.PATH_I, Kind.PATH_II), (False, True)):
        cond = ConditionKind(kind, strict)
        rows = []
        rng = make_rng(seed, 9, int(strict), 1 if kind is Kind.PATH_I else 2)
        for i in range(per_kind):
            n = int(rng.integers(3, n_max + 1))
            family = "transform" if i % 2 == 0 else "repaired"
            A = gen_condition_matrix(cond, n, seed=seed * 100_003 + i, family=family)
            pat = sign_pattern(compress(laplacian_of(A)))
            observed = "AllZero" if pat.all_zero else pat.classification.value
            rows.append((n, family, observed, pat.satisfies(predicted_sign(cond))))
        out[str(cond)] = rows
    return out


# ---------------------------------------------------------------------------
# monotone eigenvectors on paths
# ---------------------------------------------------------------------------

@dataclass
class Thm11Result:
    status: Status
    part: str
    eigenvalue: float
    vector: np.ndarray | None
    cluster_size: int
    m_residual: float
    l_residual: float
    orthogonality: float
    monotone: str
    route: str = ""

    @property
    def ok(self) -> bool:
        return self.status is Status.HOLDS


def compressed_perron(L, dec, index: int):
    """Nonnegative eigenvector ``y`` of ``M`` for the eigenvalue of ``A^L`` at ``index``.

    The spectral projector of ``M`` onto that eigenvalue is ``S Pi T`` where
    ``Pi`` projects onto the matching ``A^L`` eigenspace inside the complement
    of the ones vector. Applied to a nonnegative start it is the limit of
    normalized powers of ``M + beta I`` (largest eigenvalue) or ``beta I - M``
    (smallest), hence nonnegative. Starts tried: ones, then coordinate vectors.
    """
    n = L.n
    cluster = dec.cluster_of(index)
    X = _perp_basis(dec.basis(cluster))
    if X.shape[1] == 0:
        return None, cluster, ""
    S = build_S(n).astype(np.float64)
    T = build_T(n).astype(np.float64)
    proj_m = S @ (X @ (X.T @ T))
    starts = [("ones", np.ones(n - 1))] + [(f"e{i + 1}", np.eye(n - 1)[i]) for i in range(n - 1)]
    for name, s in starts:
        y = proj_m @ s
        top = float(np.max(np.abs(y)))
        if top <= 1e-10:
            continue
        if np.all(y >= -1e-10 * top):
            return y / top, cluster, name
    return None, cluster, ""


def verify_thm11(A: SymMatrix, part: str = "I") -> Thm11Result:
    """Constructive check of the monotone eigenvector on a path.

    Part I: ``A`` satisfies the growing path condition; expects a nondecreasing
    eigenvector of ``A^L`` for its largest eigenvalue. Part II: the shrinking
    condition and the second smallest eigenvalue.
    """
    part = part.upper()
    if part not in ("I", "II"):
        raise ValueError("part must be 'I' or 'II'")
    kind = Kind.PATH_I if part == "I" else Kind.PATH_II
    res = check_condition(A, kind)
    if not res:
        raise ValueError(f"matrix does not satisfy {kind.value}: triple {res.violation}")
    n = A.n
    if n < 2:
        raise ValueError("need n >= 2")
    L = laplacian_of(A)
    lap = L.matrix.as_float()
    M = compress(L).astype(np.float64)
    dec = eigh(L.matrix)
    index = n - 1 if part == "I" else 1
    y, cluster, route = compressed_perron(L, dec, index)
    if y is None:
        return Thm11Result(Status.INCONCLUSIVE_NUMERIC, part, float(dec.values[index]), None,
                           len(cluster), math.inf, math.inf, math.inf, Monotone.NEITHER.value)
    x = lift_vector(y)
    x = x / np.linalg.norm(x)
    lam = float(x @ lap @ x)
    scale = max(1.0, float(np.max(np.sum(np.abs(lap), axis=1))))
    m_res = float(np.max(np.abs(M @ y - lam * y))) / scale
    l_res = float(np.max(np.abs(lap @ x - lam * x))) / scale
    orth = abs(float(x.sum()))
    mono = is_monotone(x)
    good = (m_res <= 1e-8 and l_res <= 1e-8 and orth <= 1e-10
            and mono is Monotone.NONDECREASING
            and abs(lam - dec.values[index]) <= 1e-8 * scale)
    return Thm11Result(Status.HOLDS if good else Status.VIOLATION_CANDIDATE, part, lam, x,
                       len(cluster), m_res, l_res, orth, mono.value, route)


@dataclass
class CorollaryResult:
    n: int
    eigenvalue: float
    gap: float
    cluster_size: int
    sign_class: str
    monotone: str
    thm11: Thm11Result

    @property
    def ok(self) -> bool:
        return (self.cluster_size == 1
                and self.monotone in (Monotone.NONDECREASING.value, Monotone.NONINCREASING.value)
                and self.sign_ok and self.thm11.ok)

    @property
    def sign_ok(self) -> bool:
        return self.sign_class in (SignClass.ALL_POSITIVE.value, "vacuous")


def verify_corollary(n: int) -> CorollaryResult:
    """Distance Laplacian of the path P_n: simple top eigenvalue, monotone eigenvector."""
    if n < 2:
        raise ValueError("need n >= 2")
    D = distance_matrix(path_graph(n))
    L = laplacian_of(D)
    pat = sign_pattern(compress(L))
    sign_class = "vacuous" if pat.vacuous else pat.classification.value
    dec = eigh(L.matrix)
    top = dec.cluster_of(n - 1)
    gap = float(dec.values[-1] - dec.values[-2]) if n > 1 else math.inf
    mono = is_monotone(dec.vectors[:, -1])
    return CorollaryResult(n, float(dec.values[-1]), gap, len(top), sign_class, mono.value,
                           verify_thm11(D, "I"))
