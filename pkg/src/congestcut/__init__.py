"""Exact edge connectivity in a simulated CONGEST network."""

from .graph import CutResult, Graph, GraphError, conductance, cut_weight, volume
from .tree import RootedTree

__version__ = "0.1.0"

__all__ = ["CutResult", "Graph", "GraphError", "RootedTree", "conductance", "cut_weight",
           "volume", "__version__"]
