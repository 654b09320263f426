"""
Monotone eigenvectors on paths
==============================

If the entries of A grow with the distance along a path, M has
nonnegative entries. Its Perron vector lifts to a nondecreasing eigenvector
of A^L for the largest eigenvalue.
"""

import numpy as np

from treelap.harness.verify import verify_corollary, verify_thm11
from treelap.lapxform import compress, laplacian_of, sign_pattern
from treelap.monocond import Kind, check_condition, gen_condition_matrix
from treelap.treegraph import distance_matrix, path_graph

D4 = distance_matrix(path_graph(4))
print("D(P4) satisfies the growing condition:", bool(check_condition(D4, Kind.PATH_I)))
print("sign pattern of M:", sign_pattern(compress(laplacian_of(D4))).classification.value)

r = verify_thm11(D4, "I")
print("lambda_max =", r.eigenvalue, " expected 7 + sqrt(5) =", 7 + np.sqrt(5))
print("eigenvector:", np.round(r.vector / r.vector[-1], 6))

# a random matrix with the same monotonicity, and one with the reversed one
A = gen_condition_matrix(Kind.PATH_I, 9, seed=1, family="repaired")
print(A.data)
print("growing:   ", verify_thm11(A, "I").monotone)
B = gen_condition_matrix(Kind.PATH_II, 9, seed=1, family="transform")
r2 = verify_thm11(B, "II")
print("shrinking: lambda_2 =", round(r2.eigenvalue, 6), r2.monotone)

# the distance Laplacian of every path has a simple top eigenvalue
gaps = [verify_corollary(n).gap for n in (5, 20, 80)]
print("top gaps for n = 5, 20, 80:", np.round(gaps, 4))
