"""Packing and covering of minor models that meet prescribed vertex sets, at desk scale."""

from .graph_core import Graph, RootedGraph, Separation, grid_graph
from .minor_model import ModelFunction, ModelOracle, find_hzl_model, find_pure_model
from .pack_cover import covering_number, packing_number

__all__ = [
    "Graph",
    "RootedGraph",
    "Separation",
    "grid_graph",
    "ModelFunction",
    "ModelOracle",
    "find_hzl_model",
    "find_pure_model",
    "covering_number",
    "packing_number",
]
