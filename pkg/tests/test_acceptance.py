"""Acceptance criteria; each test prints one PASS/FAIL line (visible with or without -s)."""
import contextlib
import math
import time
from collections import Counter

import numpy as np
import pytest

from treelap.fiedlerclass import Outcome, classify
from treelap.harness.search import SearchConfig, search_conjecture
from treelap.harness.verify import (lemma8_suite, sign_suite, verify_corollary, verify_lemma7,
                                    verify_thm11)
from treelap.lapxform import laplacian_of
from treelap.matcore import eigh
from treelap.treegraph import distance_matrix, path_graph, star_graph

R5 = math.sqrt(5)


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run(label, limit=None):
        t0 = time.perf_counter()
        notes = []
        ok = False
        try:
            yield notes
            ok = True
        finally:
            dt = time.perf_counter() - t0
            if ok and limit is not None and dt >= limit:
                ok = False
                notes.append(f"over the {limit:.0f} s limit")
            with capsys.disabled():
                extra = f" ({'; '.join(notes)})" if notes else ""
                print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {dt:.2f} s{extra}")
        if limit is not None:
            assert dt < limit
    return run


def test_c1_difference_summation_identities(criterion):
    with criterion("C1 S*T = I and T*S = I - 1e1' exactly for 2 <= n <= 128", limit=5) as notes:
        res = verify_lemma7(128)
        assert len(res) == 127 and all(res.values())
        notes.append("127 sizes exact")


def test_c2_compression_spectrum_and_vectors(criterion):
    with criterion("C2 compression spectrum, residuals and lifting on 100 matrices", limit=30) as notes:
        reps = lemma8_suite(count=100, n_max=40, seed=0)
        assert len(reps) == 100 and max(r.n for r in reps) <= 40
        assert not [r.n for r in reps if not r.ok]
        assert max(r.spectrum_error for r in reps) <= 1e-8
        assert max(r.compress_residual for r in reps) <= 1e-8
        assert max(r.lift_residual for r in reps) <= 1e-8
        assert max(r.lift_orthogonality for r in reps) <= 1e-10
        notes.append(f"max spectrum err {max(r.spectrum_error for r in reps):.1e}, "
                     f"max residual {max(max(r.compress_residual, r.lift_residual) for r in reps):.1e}")


def test_c3_sign_patterns(criterion):
    with criterion("C3 sign pattern of the compressed matrix matches the prediction", limit=20) as notes:
        res = sign_suite(per_kind=100, n_max=30, seed=0)
        assert len(res) == 4
        for cond, rows in res.items():
            assert len(rows) >= 100 and max(r[0] for r in rows) <= 30
            assert all(r[3] for r in rows), cond
        assert all(r[2] == "AllPositive" for r in res["Thm11PathI[strict]"])
        assert all(r[2] == "AllNegative" for r in res["Thm11PathII[strict]"])
        for cond, rows in res.items():
            seen = Counter(r[2] for r in rows)
            notes.append(f"{cond} {sum(r[3] for r in rows)}/{len(rows)} {dict(seen)}")


def test_c4_path_anchors_and_sweep(criterion):
    with criterion("C4 path anchors and monotone simple top eigenvector for n <= 200", limit=60) as notes:
        r3 = verify_thm11(distance_matrix(path_graph(3)), "I")
        assert r3.ok and abs(r3.eigenvalue - 5) <= 1e-10
        np.testing.assert_allclose(r3.vector / r3.vector[-1], [-1, 0, 1], atol=1e-10)
        r4 = verify_thm11(distance_matrix(path_graph(4)), "I")
        assert r4.ok and abs(r4.eigenvalue - (7 + R5)) <= 1e-9
        np.testing.assert_allclose(r4.vector / r4.vector[-1], [-1, 2 - R5, R5 - 2, 1], atol=1e-9)
        bad = [n for n in range(2, 201) if not verify_corollary(n).ok]
        assert not bad, bad
        notes.append("199 paths simple and monotone")


def test_c5_distance_sweep_exhaustive(criterion):
    with criterion("C5 largest-eigenvalue structure for distance matrices, all trees n <= 8",
                   limit=600) as notes:
        totals = {"trials": 0, "ViolationCandidate": 0, "InconclusiveMultiplicity": 0,
                  "InconclusiveNumeric": 0}
        for n in range(2, 9):
            rep = search_conjecture(SearchConfig("conj2", f"exhaustive:{n}", family="distance"))
            sc = rep.status_counts
            totals["trials"] += rep.total
            for k in ("ViolationCandidate", "InconclusiveMultiplicity", "InconclusiveNumeric"):
                totals[k] += sc[k]
        frac = totals["InconclusiveMultiplicity"] / totals["trials"]
        notes.append(f"{totals['trials']} trees, {totals['ViolationCandidate']} candidates, "
                     f"inconclusive fraction {frac:.4f}")
        assert totals["trials"] == sum(n ** (n - 2) for n in range(2, 9))
        assert totals["ViolationCandidate"] == 0
        assert totals["InconclusiveNumeric"] == 0
        assert frac < 0.05


def test_c6_adjacency_sweep_exhaustive(criterion):
    with criterion("C6 second-eigenvalue structure for adjacency matrices, all trees n <= 7",
                   limit=120) as notes:
        trials = cands = other = 0
        for n in range(2, 8):
            rep = search_conjecture(SearchConfig("conj1", f"exhaustive:{n}", family="adjacency"))
            trials += rep.total
            cands += rep.status_counts["ViolationCandidate"]
            other += rep.status_counts["InconclusiveNumeric"]
        notes.append(f"{trials} trees, {cands} candidates")
        assert cands == 0 and other == 0


def test_c7_star_multiplicity(criterion):
    with criterion("C7 star spectrum {0,4,7,7} and the repeated eigenvalue resolves at the center") as notes:
        t = star_graph(4)
        dec = eigh(laplacian_of(distance_matrix(t)).matrix)
        np.testing.assert_allclose(dec.values, [0, 4, 7, 7], atol=1e-9)
        cluster = dec.cluster_of(3)
        assert len(cluster) == 2
        X = dec.basis(cluster)
        f = np.array([0.0, 1.0, -1.0, 0.0])
        assert np.linalg.norm(X @ (X.T @ f) - f) <= 1e-10
        c = classify(t, f)
        assert c.outcome is Outcome.CASE_II and c.characteristic_vertex == 1
        rep = search_conjecture(SearchConfig("conj2", "exhaustive:4", family="distance"))
        star = [r for r in rep.payload["instances"] if r["tree"] == "1-1"]
        assert star[0]["status"] == "Holds" and star[0]["cluster_size"] == 2
        assert star[0]["outcome"] == "CaseII"
        notes.append(f"resolved at stage {star[0]['stage']}")


def test_c8_determinism(criterion):
    with criterion("C8 identical digests across repeats and worker counts") as notes:
        configs = [
            SearchConfig("conj2", "exhaustive:6", family="distance"),
            SearchConfig("conj1", "random:12:200", family="repaired", master_seed=42),
            SearchConfig("conj2", "random:10:100", family="transform", master_seed=3, trials=2),
            SearchConfig("conj1", "random:9:100", family="transform", master_seed=5, strict=True),
        ]
        for cfg in configs:
            digests = {search_conjecture(cfg, workers=w, chunk_size=c).digest
                       for w, c in ((1, 4096), (1, 4096), (2, 17), (4, 50))}
            assert len(digests) == 1, cfg
        notes.append(f"{len(configs)} configs x 4 runs")
