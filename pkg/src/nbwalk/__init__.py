"""Non-backtracking random walks on graphs.

Directed-edge operators, numerical checks of the unweighted and weighted
Ihara determinant identities, closed-form spectra for regular and biregular
graphs, and convergence measurements for the walk.
"""

from nbwalk.config import DEFAULT_TOLERANCES, Tolerances
from nbwalk.graph import (
    DegreeProfile,
    Graph,
    classify,
    generate_test_graph,
    load_fixture,
    parse_edge_list,
)

__all__ = [
    "DEFAULT_TOLERANCES",
    "DegreeProfile",
    "Graph",
    "Tolerances",
    "classify",
    "generate_test_graph",
    "load_fixture",
    "parse_edge_list",
]

__version__ = "0.1.0"
