"""
Searching for counterexamples
=============================

For distance matrices of all small trees, the top eigenvector always has
one of the two shapes. For random matrices that only satisfy the distance
monotonicity condition, the search finds vectors that have neither shape.
"""

from treelap.harness.search import SearchConfig, search_conjecture

rep = search_conjecture(SearchConfig("conj2", "exhaustive:7", family="distance"))
print("distance, all 16807 trees on 7 vertices:", rep.status_counts)
print("eigenvalue cluster sizes:", rep.payload["cluster_sizes"])
print("digest:", rep.digest)

rep = search_conjecture(SearchConfig("conj1", "exhaustive:7", family="adjacency"))
print("adjacency, second eigenvalue:", rep.status_counts)

cfg = SearchConfig("conj1", "random:10:200", family="repaired", master_seed=42)
rep = search_conjecture(cfg)
print("random monotone matrices:", rep.status_counts, rep.payload["totals"])
cand = rep.candidates[0]
print("first candidate: tree", cand["tree"])
print("  eigenvalue", cand["eigenvalue"], "residual", cand["residual"])
print("  why it fails:", cand["classification"]["violation_reason"])

# same digest with more workers
assert search_conjecture(cfg, workers=2, chunk_size=50).digest == rep.digest
print("worker count does not change the digest")
