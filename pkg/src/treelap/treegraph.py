"""Labeled trees on vertices 1..n: construction, Prüfer coding, enumeration.

Vertices are 1-based everywhere in the public API; matrices derived from a
tree are indexed so that row ``i - 1`` belongs to vertex ``i``.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .matcore import SymMatrix

MAX_ENUMERATE_N = 9


class TreeError(ValueError):
    """Raised when an edge list or Prüfer sequence does not describe a tree."""


@dataclass(frozen=True)
class Tree:
    """A labeled tree. ``edges`` holds n-1 pairs ``(u, v)`` with ``u < v``."""

    n: int
    edges: tuple
    _adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise TreeError("a tree needs at least one vertex")
        edges = tuple(sorted((min(u, v), max(u, v)) for u, v in self.edges))
        if len(edges) != n - 1:
            raise TreeError(f"{n} vertices need {n - 1} edges, got {len(edges)}")
        adj = [[] for _ in range(n + 1)]
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n) or u == v:
                raise TreeError(f"bad edge ({u}, {v}) for n={n}")
            adj[u].append(v)
            adj[v].append(u)
        if len(set(edges)) != len(edges):
            raise TreeError("repeated edge")
        # n-1 edges + connected => acyclic
        seen = {1}
        stack = [1]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise TreeError("edge list is not connected")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    def neighbors(self, v: int) -> tuple:
        return self._adj[v]

    @property
    def degrees(self) -> tuple:
        """Degrees of vertices 1..n, in order."""
        return tuple(len(self._adj[v]) for v in range(1, self.n + 1))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs distances by BFS from every vertex (0-based int64 array)."""
        n = self.n
        d = np.zeros((n, n), dtype=np.int64)
        for s in range(1, n + 1):
            dist = [-1] * (n + 1)
            dist[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        queue.append(w)
            d[s - 1] = dist[1:]
        d.setflags(write=False)
        return d


def path_graph(n: int) -> Tree:
    if n < 1:
        raise TreeError("path needs n >= 1")
    return Tree(n, tuple((i, i + 1) for i in range(1, n)))


def star_graph(n: int) -> Tree:
    """Star with center 1 and leaves 2..n."""
    if n < 2:
        raise TreeError("star needs n >= 2")
    return Tree(n, tuple((1, i) for i in range(2, n + 1)))


def prufer_decode(seq: Sequence[int], n: int | None = None) -> Tree:
    """Decode a Prüfer sequence; ``n`` defaults to ``len(seq) + 2``."""
    seq = [int(x) for x in seq]
    if n is None:
        n = len(seq) + 2
    if n < 2 or len(seq) != n - 2:
        raise TreeError(f"sequence of length {len(seq)} does not match n={n}")
    if any(x < 1 or x > n for x in seq):
        raise TreeError(f"sequence entries must lie in 1..{n}")
    degree = [1] * (n + 1)
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return Tree(n, tuple(edges))


def prufer_encode(t: Tree) -> tuple:
    """Inverse of :func:`prufer_decode`."""
    n = t.n
    if n < 2:
        raise TreeError("Prüfer sequences need n >= 2")
    degree = [0] + list(t.degrees)
    removed = [False] * (n + 1)
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(n - 2):
        leaf = heapq.heappop(leaves)
        removed[leaf] = True
        parent = next(w for w in t.neighbors(leaf) if not removed[w])
        seq.append(parent)
        degree[parent] -= 1
        if degree[parent] == 1:
            heapq.heappush(leaves, parent)
    return tuple(seq)


def tree_count(n: int) -> int:
    """Number of labeled trees on n vertices (Cayley)."""
    return 1 if n <= 2 else n ** (n - 2)


def prufer_from_index(n: int, index: int) -> tuple:
    """The ``index``-th Prüfer sequence of length n-2 in lexicographic order."""
    if not 0 <= index < tree_count(n):
        raise IndexError(index)
    digits = []
    for _ in range(n - 2):
        index, r = divmod(index, n)
        digits.append(r + 1)
    return tuple(reversed(digits))


def tree_from_index(n: int, index: int) -> Tree:
    return prufer_decode(prufer_from_index(n, index), n)


def enumerate_trees(n: int) -> Iterator[Tree]:
    """Every labeled tree on n vertices once, in lexicographic Prüfer order."""
    if not 2 <= n <= MAX_ENUMERATE_N:
        raise TreeError(f"enumeration is limited to 2 <= n <= {MAX_ENUMERATE_N}, got {n}")
    for index in range(tree_count(n)):
        yield tree_from_index(n, index)


def make_rng(seed: int, *extra: int) -> np.random.Generator:
    """Counter-based (Philox) generator keyed by ``seed`` and optional indices."""
    ss = np.random.SeedSequence([int(seed) & (2**64 - 1), *[int(e) for e in extra]])
    return np.random.Generator(np.random.Philox(ss))


def random_tree(n: int, seed: int) -> Tree:
    """Uniformly random labeled tree; identical for identical ``(n, seed)``."""
    if n < 2:
        raise TreeError("random_tree needs n >= 2")
    rng = make_rng(seed)
    seq = rng.integers(1, n + 1, size=n - 2)
    return prufer_decode(seq.tolist(), n)


def adjacency_matrix(t: Tree) -> SymMatrix:
    a = np.zeros((t.n, t.n), dtype=np.int64)
    for u, v in t.edges:
        a[u - 1, v - 1] = a[v - 1, u - 1] = 1
    a.setflags(write=False)
    return SymMatrix(a, True)


def distance_matrix(t: Tree) -> SymMatrix:
    return SymMatrix(t.distances, True)


def load_tree(path) -> Tree:
    """Read the edge-list format: first line n, then one ``u v`` per line."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln[0].startswith("#")]
    if not lines:
        raise TreeError(f"{path}: empty tree file")
    try:
        n = int(lines[0][0])
        edges = tuple((int(ln[0]), int(ln[1])) for ln in lines[1:])
    except (ValueError, IndexError):
        raise TreeError(f"{path}: malformed tree file") from None
    return Tree(n, edges)


def write_tree(t: Tree, path) -> None:
    body = "".join(f"{u} {v}\n" for u, v in t.edges)
    Path(path).write_text(f"{t.n}\n{body}")
