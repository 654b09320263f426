"""Search for trees and matrices where no eigenvector has the two-case structure.

Each instance is a (tree, matrix) pair. The target eigenvalue is the second
smallest one (``conj1``) or the largest one (``conj2``) of the generalized
Laplacian. A simple target is decided by classifying its eigenvector; a
clustered one by searching its eigenspace. Since the claim under test is
existential, an unsuccessful eigenspace search is only ever reported as
inconclusive.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from ..fiedlerclass import CaseClassification, classify
from ..lapxform import laplacian_of
from ..matcore import ConvergenceError, SymMatrix, eigh, sym_from_entries
from ..monocond import ConditionKind, Kind, gen_condition_matrix
from ..treegraph import (Tree, adjacency_matrix, distance_matrix, make_rng, prufer_encode,
                         random_tree, tree_count, tree_from_index, MAX_ENUMERATE_N)
from .report import ConjectureReport
from .status import Status

FAMILIES = ("distance", "adjacency", "transform", "repaired")
_CONDITION = {"conj1": Kind.CONJ1, "conj2": Kind.CONJ2}
SPARSE_CAP = 2000
REFINE_TOL = 1e-13
TIGHTEN = 1e-3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    kind: str                     # "conj1" | "conj2"
    trees: str                    # "exhaustive:N" | "random:N:COUNT"
    family: str = "distance"
    master_seed: int = 0
    trials: int = 1               # matrices per tree (randomized families only)
    zero_tol: float = 1e-8        # relative to ||f||_inf
    cluster_tol: float = 1e-8     # relative to max(1, ||A^L||_inf)
    eig_tol: float = 1e-12
    samples: int | None = None    # random eigenspace combinations; None = by dimension
    strict: bool = False          # generated families satisfy the strict inequalities

    def validate(self) -> None:
        if self.kind not in _CONDITION:
            raise ConfigError(f"kind must be conj1 or conj2, got {self.kind!r}")
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.family == "distance" and self.kind != "conj2":
            raise ConfigError("the distance matrix only satisfies the conj2 condition")
        if self.family == "adjacency" and self.kind != "conj1":
            raise ConfigError("the adjacency matrix only satisfies the conj1 condition")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if min(self.zero_tol, self.cluster_tol, self.eig_tol) <= 0:
            raise ConfigError("tolerances must be positive")
        self.tree_source()

    def tree_source(self) -> tuple:
        parts = self.trees.split(":")
        try:
            if parts[0] == "exhaustive" and len(parts) == 2:
                n = int(parts[1])
                if not 2 <= n <= MAX_ENUMERATE_N:
                    raise ConfigError(f"exhaustive enumeration needs 2 <= n <= {MAX_ENUMERATE_N}")
                return "exhaustive", n, tree_count(n)
            if parts[0] == "random" and len(parts) == 3:
                n, count = int(parts[1]), int(parts[2])
                if n < 2 or count < 1:
                    raise ConfigError("random trees need n >= 2 and count >= 1")
                return "random", n, count
        except ValueError:
            pass
        raise ConfigError(f"bad tree spec {self.trees!r}; use exhaustive:N or random:N:COUNT")

    @property
    def deterministic_family(self) -> bool:
        return self.family in ("distance", "adjacency")

    @property
    def total(self) -> int:
        _, _, count = self.tree_source()
        return count * (1 if self.deterministic_family else self.trials)


def trial_seed(master_seed: int, index: int) -> int:
    """64-bit seed for trial ``index``; independent of execution order."""
    ss = np.random.SeedSequence([int(master_seed) & (2**64 - 1), int(index)])
    return int(ss.generate_state(1, np.uint64)[0])


def instance_inputs(cfg: SearchConfig, index: int) -> tuple:
    """(tree, matrix, seed) for global trial ``index``."""
    mode, n, _ = cfg.tree_source()
    per_tree = 1 if cfg.deterministic_family else cfg.trials
    tree_idx, _ = divmod(index, per_tree)
    seed = trial_seed(cfg.master_seed, index)
    if mode == "exhaustive":
        tree = tree_from_index(n, tree_idx)
    else:
        tree = random_tree(n, trial_seed(cfg.master_seed ^ 0x5EED, tree_idx))
    if cfg.family == "distance":
        A = distance_matrix(tree)
    elif cfg.family == "adjacency":
        A = adjacency_matrix(tree)
    else:
        A = gen_condition_matrix(ConditionKind(_CONDITION[cfg.kind], cfg.strict), tree, seed,
                                 cfg.family)
    return tree, A, seed


def random_sample_count(d: int) -> int:
    return 1000 if d <= 3 else max(100, 3000 // d)


def _eigenspace_candidates(X: np.ndarray, rng, samples: int):
    """Vectors of span(X) to try, in order: basis, sparse combinations, random."""
    n, d = X.shape
    for k in range(d):
        yield "basis", X[:, k]
    for rows in itertools.islice(itertools.combinations(range(n), d - 1), SPARSE_CAP):
        _, s, vt = np.linalg.svd(X[list(rows), :])
        f = X @ vt[-1]
        if np.max(np.abs(f)) > 1e-8:
            yield "sparse", f
    for _ in range(samples):
        c = rng.standard_normal(d)
        c /= np.linalg.norm(c)
        yield "random", X @ c


@dataclass
class EigenspaceHit:
    stage: str | None
    vector: np.ndarray | None
    classification: CaseClassification | None
    tried: int


def search_eigenspace(tree: Tree, X: np.ndarray, rng, samples: int,
                      zero_tol: float = 1e-8) -> EigenspaceHit:
    """First vector of span(X) that classifies as Case I or II, if any is found."""
    tried = 0
    for stage, f in _eigenspace_candidates(X, rng, samples):
        tried += 1
        c = classify(tree, f, zero_tol * float(np.max(np.abs(f))))
        if c.ok:
            return EigenspaceHit(stage, f, c, tried)
    return EigenspaceHit(None, None, None, tried)


def refine(lap: np.ndarray, lam: float, f: np.ndarray, scale: float, max_steps: int = 5):
    """Inverse iteration from ``f`` near ``lam``; returns (vector, eigenvalue, residual trace)."""
    n = lap.shape[0]
    x = f / np.linalg.norm(f)
    trace = [float(np.max(np.abs(lap @ x - lam * x)))]
    shift = lam + 1e-10 * scale
    for _ in range(max_steps):
        if trace[-1] <= REFINE_TOL * scale:
            break
        try:
            z = np.linalg.solve(lap - shift * np.eye(n), x)
        except np.linalg.LinAlgError:
            shift += 1e-9 * scale
            continue
        x = z / np.linalg.norm(z)
        lam = float(x @ lap @ x)
        trace.append(float(np.max(np.abs(lap @ x - lam * x))))
    return x, lam, trace


def evaluate_instance(tree: Tree, A: SymMatrix, kind: str, seed: int, *,
                      zero_tol: float = 1e-8, cluster_tol: float = 1e-8,
                      eig_tol: float = 1e-12, samples: int | None = None) -> dict:
    """Decide one instance; returns a JSON-ready record."""
    n = tree.n
    L = laplacian_of(A)
    lap = L.matrix.as_float()
    scale = max(1.0, float(np.max(np.sum(np.abs(lap), axis=1))))
    target = 1 if kind == "conj1" else n - 1
    rec = {"status": None, "eigenvalue": None, "cluster_size": None}
    try:
        dec = eigh(L.matrix, tol=eig_tol, cluster_tol=cluster_tol)
    except ConvergenceError as exc:
        rec.update(status=Status.INCONCLUSIVE_NUMERIC.value, reason=str(exc))
        return rec
    cluster = dec.cluster_of(target)
    lam = float(dec.values[target])
    rec.update(eigenvalue=lam, cluster_size=len(cluster))
    if dec.residual > 1e-8 * scale:
        rec.update(status=Status.INCONCLUSIVE_NUMERIC.value, reason="eigen residual")
        return rec
    X = dec.basis(cluster)

    if len(cluster) > 1:
        k = random_sample_count(len(cluster)) if samples is None else samples
        found = search_eigenspace(tree, X, make_rng(seed, 17), k, zero_tol)
        if found.classification is not None:
            c = found.classification
            rec.update(status=Status.HOLDS.value, outcome=c.outcome.value,
                       strict=c.strict, stage=found.stage, tried=found.tried)
        else:
            rec.update(status=Status.INCONCLUSIVE_MULTIPLICITY.value, tried=found.tried)
        return rec

    f = X[:, 0]
    c = classify(tree, f, zero_tol * float(np.max(np.abs(f))))
    if c.ok:
        rec.update(status=Status.HOLDS.value, outcome=c.outcome.value, strict=c.strict,
                   stage="simple")
        return rec
    x, lam_r, trace = refine(lap, lam, f, scale)
    tight = zero_tol * TIGHTEN * float(np.max(np.abs(x)))
    c2 = classify(tree, x, tight)
    if c2.ok:
        rec.update(status=Status.HOLDS.value, outcome=c2.outcome.value, strict=c2.strict,
                   stage="refined", refinement=trace)
        return rec
    if trace[-1] > REFINE_TOL * scale * 100:
        rec.update(status=Status.INCONCLUSIVE_NUMERIC.value, reason="refinement stalled",
                   refinement=trace)
        return rec
    rec.update(status=Status.VIOLATION_CANDIDATE.value, refinement=trace,
               candidate={
                   "tree": [list(e) for e in tree.edges],
                   "n": n,
                   "matrix": A.data.tolist(),
                   "eigenvalue": lam_r,
                   "vector": x.tolist(),
                   "residual": trace[-1],
                   "zero_tol": tight,
                   "classification": c2.to_dict(),
                   "weak_ok": c2.weak_ok,
               })
    return rec


def revalidate(candidate: dict, kind: str, cluster_tol: float = 1e-8) -> bool:
    """Recheck a stored candidate from scratch: True if the violation reproduces."""
    tree = Tree(candidate["n"], tuple(tuple(e) for e in candidate["tree"]))
    A = sym_from_entries(np.array(candidate["matrix"]))
    L = laplacian_of(A)
    lap = L.matrix.as_float()
    scale = max(1.0, float(np.max(np.sum(np.abs(lap), axis=1))))
    x = np.array(candidate["vector"])
    lam = float(candidate["eigenvalue"])
    if float(np.max(np.abs(lap @ x - lam * x))) > 100 * REFINE_TOL * scale:
        return False
    dec = eigh(L.matrix, cluster_tol=cluster_tol)
    target = 1 if kind == "conj1" else tree.n - 1
    if len(dec.cluster_of(target)) != 1 or abs(dec.values[target] - lam) > 1e-8 * scale:
        return False
    return not classify(tree, x, candidate["zero_tol"]).ok


def _tree_id(tree: Tree) -> str:
    return "-".join(map(str, prufer_encode(tree))) if tree.n > 2 else ""


def run_chunk(cfg: SearchConfig, start: int, stop: int) -> list:
    out = []
    for i in range(start, stop):
        tree, A, seed = instance_inputs(cfg, i)
        rec = evaluate_instance(tree, A, cfg.kind, seed, zero_tol=cfg.zero_tol,
                                cluster_tol=cfg.cluster_tol, eig_tol=cfg.eig_tol,
                                samples=cfg.samples)
        rec["index"] = i
        rec["tree"] = _tree_id(tree)
        out.append(rec)
    return out


def _chunks(total: int, size: int):
    return [(s, min(s + size, total)) for s in range(0, total, size)]


def search_conjecture(cfg: SearchConfig, workers: int = 1, chunk_size: int = 4096,
                      progress=None) -> ConjectureReport:
    """Run every trial of ``cfg`` and assemble the report.

    Results do not depend on ``workers``: each trial derives its inputs from
    ``(master_seed, index)`` alone and records are merged by index.
    """
    cfg.validate()
    t0 = time.perf_counter()
    total = cfg.total
    chunks = _chunks(total, chunk_size)
    records = []
    if workers <= 1:
        for s, e in chunks:
            records.extend(run_chunk(cfg, s, e))
            if progress:
                progress(len(records), total)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_chunk, cfg, s, e) for s, e in chunks]
            for fut in futures:
                records.extend(fut.result())
                if progress:
                    progress(len(records), total)
    records.sort(key=lambda r: r["index"])

    # second pass: every candidate must reproduce from its stored data
    for rec in records:
        if rec["status"] == Status.VIOLATION_CANDIDATE.value:
            rec["revalidated"] = revalidate(rec["candidate"], cfg.kind, cfg.cluster_tol)
            if not rec["revalidated"]:
                rec["status"] = Status.INCONCLUSIVE_NUMERIC.value
                rec["reason"] = "candidate did not reproduce"

    return ConjectureReport.build(asdict(cfg), records, time.perf_counter() - t0, workers)
