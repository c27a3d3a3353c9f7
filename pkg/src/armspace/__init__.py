"""Combinatorial motion planning for a robotic arm over a graph.

The arm of length ``length`` is anchored at a base vertex of a connected graph
and moves inside the workspace ``G x Z>=0``.  Its configurations are modelled by
path tableaux and by consistent lower sets in the poset with inconsistent pairs
(PIP) of indexed paths; the modules below build those objects, the cubical
complexes on top of them, and the planner that uses them.
"""

from armspace.errors import ArmError, GraphError, GuardExceeded, IllegalMove
from armspace.graph_core import Graph, GraphPath, SuffixDecomposition, load_graph
from armspace.pip import IndexedPath, LowerSet, PipInstance, build_ip
from armspace.tableaux import ExtendedTableau, PathTableau
from armspace.arm import Configuration, Move, RobotArm

__all__ = [
    "ArmError",
    "Configuration",
    "ExtendedTableau",
    "Graph",
    "GraphError",
    "GraphPath",
    "GuardExceeded",
    "IllegalMove",
    "IndexedPath",
    "LowerSet",
    "Move",
    "PathTableau",
    "PipInstance",
    "RobotArm",
    "SuffixDecomposition",
    "build_ip",
    "load_graph",
]

__version__ = "0.1.0"
