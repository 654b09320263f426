"""
Two ways a vector can sit on a tree
===================================

Case I: one edge carries the sign change and values grow away from it.
Case II: one zero vertex is next to nonzero values and every branch from it
is monotone or vanishes.
"""

import numpy as np

from treelap.fiedlerclass import classify
from treelap.lapxform import laplacian_of
from treelap.matcore import eigh
from treelap.treegraph import adjacency_matrix, distance_matrix, prufer_decode, star_graph

t = prufer_decode([4, 4, 5, 5])           # a caterpillar on 6 vertices
print("edges:", t.edges)

# the Fiedler vector of the ordinary Laplacian always has one of the two shapes
dec = eigh(laplacian_of(adjacency_matrix(t)).matrix)
f = dec.vectors[:, 1]
print("lambda_2 =", round(dec.values[1], 6), " f =", np.round(f, 4))
print(classify(t, f).to_dict())

# the star has a repeated top eigenvalue for its distance Laplacian
s = star_graph(4)
dec = eigh(laplacian_of(distance_matrix(s)).matrix)
print("star spectrum:", np.round(dec.values, 10), " clusters:", dec.clusters)
print(classify(s, [0, 1, -1, 0]).to_dict())

# an alternating vector fails both shapes
print(classify(prufer_decode([2, 3]), [1, -1, 1, -1]).violation_reason)
