"""Spectral tools for generalized Laplacians of matrices indexed by tree vertices."""

__version__ = "0.1.0"

from .matcore import EigenDecomp, SymMatrix, eigh, perron_vector, sym_from_entries
from .treegraph import (Tree, adjacency_matrix, distance_matrix, enumerate_trees, path_graph,
                        prufer_decode, prufer_encode, random_tree, star_graph)
from .lapxform import (GeneralizedLaplacian, SignClass, build_S, build_T, compress,
                       compress_vector, laplacian_of, lift_vector, sign_pattern)
from .monocond import ConditionKind, Kind, check_condition, gen_condition_matrix
from .fiedlerclass import CaseClassification, Monotone, Outcome, classify, is_monotone
