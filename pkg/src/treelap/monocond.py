"""Monotonicity hypotheses on matrices indexed by tree vertices.

Four kinds of condition are supported:

* ``CONJ1``  - tree: ``a_ij <= a_ik`` whenever j, k are adjacent and ``d_ij > d_ik``
  (entries do not grow as j moves away from i);
* ``CONJ2``  - tree: same clause with ``a_ij >= a_ik``;
* ``PATH_I``  - path order: ``a_ij >= a_ik`` if ``j < k < i`` and ``a_ij <= a_ik`` if ``i < j < k``;
* ``PATH_II`` - path order: the reverse inequalities.

``strict=True`` replaces every inequality by its strict version.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .matcore import MatrixError, SymMatrix, sym_from_entries
from .treegraph import Tree, make_rng, path_graph

MAX_REPAIR_PASSES = 50


class Kind(enum.Enum):
    CONJ1 = "Conj1Tree"
    CONJ2 = "Conj2Tree"
    PATH_I = "Thm11PathI"
    PATH_II = "Thm11PathII"

    @property
    def on_tree(self) -> bool:
        return self in (Kind.CONJ1, Kind.CONJ2)

    @property
    def grows_with_distance(self) -> bool:
        """True when entries must not decrease as the distance from i grows."""
        return self in (Kind.CONJ2, Kind.PATH_I)


@dataclass(frozen=True)
class ConditionKind:
    kind: Kind
    strict: bool = False

    def __str__(self):
        return self.kind.value + ("[strict]" if self.strict else "")


class RepairError(RuntimeError):
    """The repair loop did not reach a matrix satisfying the condition."""


@dataclass(frozen=True)
class ConditionResult:
    ok: bool
    violation: tuple | None = None  # 1-based (i, j, k)

    def __bool__(self):
        return self.ok


def _as_condition(kind) -> ConditionKind:
    if isinstance(kind, ConditionKind):
        return kind
    if isinstance(kind, Kind):
        return ConditionKind(kind)
    return ConditionKind(Kind(kind))


def _first(mask: np.ndarray) -> tuple | None:
    hits = np.argwhere(mask)
    if hits.size == 0:
        return None
    # argwhere is row-major, i.e. lexicographic in (i, j, k)
    i, j, k = hits[0]
    return int(i) + 1, int(j) + 1, int(k) + 1


def _bad(aij, aik, want_ge: bool, strict: bool) -> np.ndarray:
    if want_ge:
        return aij <= aik if strict else aij < aik
    return aij >= aik if strict else aij > aik


def check_condition(A: SymMatrix, kind, tree: Tree | None = None) -> ConditionResult:
    """Test every ordered triple of distinct vertices against the condition.

    Returns the lexicographically first violating triple ``(i, j, k)``.
    """
    cond = _as_condition(kind)
    a = A.data
    n = A.n
    if cond.kind.on_tree:
        if tree is None:
            raise ValueError(f"{cond} needs a tree")
        if tree.n != n:
            raise ValueError(f"tree has {tree.n} vertices, matrix is {n} x {n}")
    elif tree is not None:
        raise ValueError(f"{cond} is a path condition and takes no tree")
    off = a - np.diag(np.diag(a))
    if np.any(off < 0):
        raise MatrixError("matrix has a negative off-diagonal entry")
    if np.any(np.diag(a) != 0):
        raise MatrixError("matrix must have a zero diagonal")

    idx = np.arange(n)
    I = idx[:, None, None]
    J = idx[None, :, None]
    K = idx[None, None, :]
    aij = a[:, :, None]
    aik = a[:, None, :]
    distinct = (I != J) & (J != K) & (I != K)

    if cond.kind.on_tree:
        d = tree.distances
        adj = (d == 1)[None, :, :]
        side = adj & (d[:, :, None] > d[:, None, :]) & distinct
        bad = side & _bad(aij, aik, cond.kind.grows_with_distance, cond.strict)
    else:
        left = (J < K) & (K < I)
        right = (I < J) & (J < K)
        ge_left = cond.kind is Kind.PATH_I
        bad = (left & _bad(aij, aik, ge_left, cond.strict)) | (
            right & _bad(aij, aik, not ge_left, cond.strict))
    witness = _first(bad)
    return ConditionResult(witness is None, witness)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

_KIND_CODE = {Kind.CONJ1: 1, Kind.CONJ2: 2, Kind.PATH_I: 3, Kind.PATH_II: 4}
_FAMILY_CODE = {"transform": 1, "repaired": 2}


def _resolve_tree(cond: ConditionKind, tree_or_n) -> Tree:
    if isinstance(tree_or_n, Tree):
        if not cond.kind.on_tree:
            raise ValueError(f"{cond} is a path condition; pass n instead of a tree")
        return tree_or_n
    n = int(tree_or_n)
    if n < 2:
        raise ValueError("need n >= 2")
    if cond.kind.on_tree:
        raise ValueError(f"{cond} needs a tree")
    return path_graph(n)


def distance_transform(tree: Tree, g) -> np.ndarray:
    """``a_ij = g(d_ij)`` for i != j with ``g`` given as values on 1..diam."""
    g = np.asarray(g)
    d = tree.distances
    out = np.zeros(d.shape, dtype=g.dtype)
    mask = d > 0
    out[mask] = g[d[mask] - 1]
    return out


def _monotone_steps(rng, length: int, grows: bool, strict: bool, integer: bool) -> np.ndarray:
    lo = 1 if strict else 0
    if integer:
        start = rng.integers(1, 4)
        steps = rng.integers(lo, 4, size=length - 1)
        h = np.concatenate(([start], start + np.cumsum(steps))).astype(np.int64)
    else:
        start = rng.uniform(0.5, 2.0)
        steps = rng.uniform(0.0, 1.0, size=length - 1) + (0.1 if strict else 0.0)
        h = np.concatenate(([start], start + np.cumsum(steps)))
    # h is nondecreasing; read it backwards for a nonincreasing g
    return h if grows else h[::-1].copy()


def _repair(a: np.ndarray, tree: Tree, grows: bool, strict: bool) -> int:
    """Raise entries in place until every row is monotone along the tree.

    Returns the number of passes used, or -1 if the cap was hit.
    """
    n = tree.n
    step = 1 if strict else 0
    orders = []
    for root in range(1, n + 1):
        order, parent = [], {root: 0}
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                for w in tree.neighbors(u):
                    if w not in parent:
                        parent[w] = u
                        order.append((w, u))
                        nxt.append(w)
            frontier = nxt
        orders.append(order)
    for sweep in range(1, MAX_REPAIR_PASSES + 1):
        before = a.copy()
        for root in range(1, n + 1):
            row = a[root - 1]
            order = orders[root - 1]
            if grows:
                # outward: child >= parent (+1 strict); the root entry is unconstrained
                for w, u in order:
                    if u != root and row[w - 1] < row[u - 1] + step:
                        row[w - 1] = row[u - 1] + step
            else:
                # inward: parent >= child (+1 strict), processed deepest first
                for w, u in reversed(order):
                    if u != root and row[u - 1] < row[w - 1] + step:
                        row[u - 1] = row[w - 1] + step
        np.maximum(a, a.T, out=a)
        if np.array_equal(a, before):
            return sweep
    return -1


def gen_condition_matrix(kind, tree_or_n, seed: int, family: str = "transform",
                         integer: bool = True) -> SymMatrix:
    """Random symmetric nonnegative zero-diagonal matrix satisfying ``kind``.

    ``family="transform"`` composes a random monotone step function with the
    tree distance; ``family="repaired"`` draws random entries and raises
    deficient ones until the condition holds.
    """
    cond = _as_condition(kind)
    tree = _resolve_tree(cond, tree_or_n)
    if family not in _FAMILY_CODE:
        raise ValueError(f"unknown family {family!r}")
    rng = make_rng(seed, _KIND_CODE[cond.kind], int(cond.strict), _FAMILY_CODE[family], tree.n)
    grows = cond.kind.grows_with_distance
    n = tree.n

    if family == "transform":
        diam = int(tree.distances.max()) if n > 1 else 1
        g = _monotone_steps(rng, diam, grows, cond.strict, integer)
        a = distance_transform(tree, g)
    else:
        if integer:
            a = rng.integers(0, 10, size=(n, n)).astype(np.int64)
        else:
            a = rng.uniform(0.0, 10.0, size=(n, n))
        a = np.triu(a, 1)
        a = a + a.T
        if _repair(a, tree, grows, cond.strict) < 0:
            raise RepairError(f"repair did not converge in {MAX_REPAIR_PASSES} passes")
        np.fill_diagonal(a, 0)

    A = sym_from_entries(a) if integer else SymMatrix(_ro(a), False)
    res = check_condition(A, cond, tree if cond.kind.on_tree else None)
    if not res:
        raise RepairError(f"generated matrix violates {cond} at {res.violation}")
    return A


def _ro(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a
