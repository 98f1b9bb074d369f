"""Finite rings, their projective lines, radical parallelism and induced maps."""

from .chaintrafo import KAlgebra, algebra_of, gamma_table, group_B, group_N, group_T, totality_sweep
from .projline import Matrix2, ProjectiveLine, distant_graph, enumerate_points, point_of
from .radpar import compare_relations, is_local_ring, parallel_classes, parallel_matrix
from .rings import Ring, build_ring, jacobson_radical, quotient_ring

__version__ = "0.1.0"

__all__ = [
    "KAlgebra", "Matrix2", "ProjectiveLine", "Ring", "algebra_of", "build_ring", "compare_relations",
    "distant_graph", "enumerate_points", "gamma_table", "group_B", "group_N", "group_T", "is_local_ring",
    "jacobson_radical", "parallel_classes", "parallel_matrix", "point_of", "quotient_ring", "totality_sweep",
]
