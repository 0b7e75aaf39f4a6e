"""Distributed list coloring with conflict-free sublist systems."""

from .graph_model import ColorSpace, Instance, ListAssignment, OrientedGraph, VertexColoring

__all__ = ["ColorSpace", "Instance", "ListAssignment", "OrientedGraph", "VertexColoring"]
__version__ = "0.1.0"
