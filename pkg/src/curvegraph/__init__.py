"""Bakry-Emery curvature on weighted graphs and doubly warped products."""

from .curvature import CurvatureResult, curvature_function, curvature_value
from .graph import INF, GraphError, WeightedGraph, build_graph, from_arrays
from .warped import TwistedProductSpec, WarpedProductSpec, doubly_warped_product

__all__ = [
    "INF",
    "CurvatureResult",
    "GraphError",
    "TwistedProductSpec",
    "WarpedProductSpec",
    "WeightedGraph",
    "build_graph",
    "curvature_function",
    "curvature_value",
    "doubly_warped_product",
    "from_arrays",
]
