"""Two-case structure test for vectors on trees.

A vector ``f`` on the vertices of a tree is in

* Case I if it has no zero entries, exactly one edge ``{u1, u2}`` with
  ``f(u1) > 0 > f(u2)``, and ``f`` strictly increases along every path leaving
  ``u1`` away from ``u2`` (and strictly decreases leaving ``u2`` away from ``u1``);
* Case II if it has zeros, exactly one zero vertex ``u`` adjacent to a nonzero
  vertex, and every branch at ``u`` is nondecreasing, nonincreasing or
  identically zero along paths leaving ``u``.

Entries with ``|f(v)| <= zero_tol`` count as zero. The default tolerance is
``1e-8 * ||f||_inf`` so the test is invariant under scaling of ``f``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .treegraph import Tree

DEFAULT_ZERO_TOL = 1e-8
DEFAULT_MONO_SLACK = 1e-10


class Outcome(enum.Enum):
    CASE_I = "CaseI"
    CASE_II = "CaseII"
    VIOLATION = "Violation"


@dataclass(frozen=True)
class CaseClassification:
    outcome: Outcome
    characteristic_edge: tuple | None = None
    characteristic_vertex: int | None = None
    violation_reason: dict | None = None
    zero_threshold_used: float = 0.0
    # strict: every nonzero step is a strict increase/decrease beyond the threshold
    strict: bool = False

    @property
    def ok(self) -> bool:
        return self.outcome is not Outcome.VIOLATION

    @property
    def weak_ok(self) -> bool:
        """Passes once Case I's strict increase is relaxed to weak monotonicity."""
        if self.ok:
            return True
        return bool(self.violation_reason and self.violation_reason.get("weak_ok"))

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "characteristic_edge": list(self.characteristic_edge) if self.characteristic_edge else None,
            "characteristic_vertex": self.characteristic_vertex,
            "violation_reason": self.violation_reason,
            "zero_threshold_used": self.zero_threshold_used,
            "strict": self.strict,
        }


def _walk(t: Tree, root: int, banned: int):
    """(parent, child) pairs of the component of ``root`` once edge to ``banned`` is cut."""
    seen = {root, banned}
    stack = [root]
    while stack:
        u = stack.pop()
        for w in t.neighbors(u):
            if w not in seen:
                seen.add(w)
                stack.append(w)
                yield u, w


def classify(t: Tree, f, zero_tol: float | None = None) -> CaseClassification:
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (t.n,):
        raise ValueError(f"vector has shape {f.shape}, tree has {t.n} vertices")
    scale = float(np.max(np.abs(f))) if f.size else 0.0
    if scale == 0.0:
        raise ValueError("cannot classify the zero vector")
    tol = DEFAULT_ZERO_TOL * scale if zero_tol is None else float(zero_tol)
    if tol < 0:
        raise ValueError("zero_tol must be nonnegative")

    val = {v: float(f[v - 1]) for v in range(1, t.n + 1)}
    sign = {v: (0 if abs(x) <= tol else (1 if x > 0 else -1)) for v, x in val.items()}
    zeros = [v for v in val if sign[v] == 0]

    def result(outcome, **kw):
        return CaseClassification(outcome, zero_threshold_used=tol, **kw)

    if not zeros:
        crossing = [(u, v) if sign[u] > 0 else (v, u)
                    for u, v in t.edges if sign[u] != sign[v]]
        if len(crossing) != 1:
            return result(Outcome.VIOLATION, violation_reason={
                "kind": "sign_change_edges", "count": len(crossing),
                "edges": [sorted(e) for e in crossing]})
        u1, u2 = crossing[0]
        first_fail = None
        weak_ok = True
        for root, banned, direction in ((u1, u2, 1.0), (u2, u1, -1.0)):
            for p, c in _walk(t, root, banned):
                step = direction * (val[c] - val[p])
                if step <= tol and first_fail is None:
                    first_fail = {"kind": "not_strictly_monotone", "from": root,
                                  "edge": [p, c], "step": step}
                if step < -tol:
                    weak_ok = False
        if first_fail is not None:
            # weak_ok: the vector would pass with nondecreasing/nonincreasing steps
            first_fail["weak_ok"] = weak_ok
            return result(Outcome.VIOLATION, characteristic_edge=(u1, u2),
                          violation_reason=first_fail)
        return result(Outcome.CASE_I, characteristic_edge=(u1, u2), strict=True)

    bridges = [v for v in zeros if any(sign[w] != 0 for w in t.neighbors(v))]
    if len(bridges) != 1:
        return result(Outcome.VIOLATION, violation_reason={
            "kind": "zero_vertex_ambiguity", "count": len(bridges), "vertices": bridges})
    u = bridges[0]
    strict = True
    for w in t.neighbors(u):
        direction = float(sign[w])
        for p, c in [(u, w), *_walk(t, w, u)]:
            if direction == 0.0:
                if sign[c] != 0:
                    return result(Outcome.VIOLATION, violation_reason={
                        "kind": "branch_not_zero", "branch": w, "vertex": c})
                continue
            step = direction * (val[c] - val[p])
            if step < -tol:
                return result(Outcome.VIOLATION, violation_reason={
                    "kind": "branch_not_monotone", "branch": w,
                    "edge": [p, c], "step": step})
            if step <= tol:
                strict = False
    return result(Outcome.CASE_II, characteristic_vertex=u, strict=strict)


class Monotone(enum.Enum):
    NONDECREASING = "Nondecreasing"
    NONINCREASING = "Nonincreasing"
    BOTH = "Both"
    NEITHER = "Neither"


def is_monotone(f, slack: float | None = None) -> Monotone:
    """Monotonicity of a vector in index order, up to ``slack``."""
    f = np.asarray(f, dtype=np.float64)
    if slack is None:
        slack = DEFAULT_MONO_SLACK * (float(np.max(np.abs(f))) if f.size else 0.0)
    d = np.diff(f)
    up = bool(np.all(d >= -slack))
    down = bool(np.all(d <= slack))
    if up and down:
        return Monotone.BOTH
    if up:
        return Monotone.NONDECREASING
    if down:
        return Monotone.NONINCREASING
    return Monotone.NEITHER
