"""Quantum minors of SE-graph path matrices: flows, exchanges and their q-exponents."""
from __future__ import annotations

from .exchange import DoubleFlow, decompose, exchange, exchange_ratio
from .minors import MinorIndex, check_lindstrom, enumerate_flows, path_matrix, q_minor
from .pathkit import DPath, path_weight, varphi
from .qtorus import CommutationTable, QElement
from .segraph import SEGraph, full_grid, generate_grid_subgraph, load, save

__all__ = [
    "CommutationTable",
    "DPath",
    "DoubleFlow",
    "MinorIndex",
    "QElement",
    "SEGraph",
    "check_lindstrom",
    "decompose",
    "enumerate_flows",
    "exchange",
    "exchange_ratio",
    "full_grid",
    "generate_grid_subgraph",
    "load",
    "path_matrix",
    "path_weight",
    "q_minor",
    "save",
    "varphi",
]
