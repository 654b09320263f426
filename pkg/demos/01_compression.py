"""
Compressing a generalized Laplacian
===================================

Every symmetric A gives a Laplacian-like matrix A^L with zero row sums.
Conjugating by the difference matrix S and the summation matrix T removes
the trivial zero eigenvalue and leaves an (n-1) x (n-1) matrix M.
"""

import numpy as np

from treelap.lapxform import build_S, build_T, compress, compress_vector, laplacian_of, lift_vector
from treelap.treegraph import distance_matrix, path_graph

# distance matrix of the path 1 - 2 - 3
D = distance_matrix(path_graph(3))
L = laplacian_of(D)
print("D^L =\n", L.matrix.data)

# S takes consecutive differences, T takes prefix sums
S, T = build_S(3), build_T(3)
print("S T =\n", S @ T)
print("T S =\n", T @ S)   # identity minus a column of ones in the first slot

M = compress(L)
print("M = S D^L T =\n", M)
print("eig(D^L):", np.round(np.linalg.eigvalsh(L.matrix.as_float()), 12))
print("eig(M):  ", np.sort(np.linalg.eigvals(M).real))

# eigenvectors travel both ways
y = np.array([-1.0, 0.0, 1.0])
print("S y =", compress_vector(y), " M S y =", M @ compress_vector(y))
print("lift (1, 1) =", lift_vector([1.0, 1.0]))
