"""Friendship-graph analysis toolkit.

Simulated crawling, GraphML persistence, multigraph cleaning, social network
metrics, metric-driven filtering and force-directed layout.
"""

from friendgraph.errors import (
    DegenerateGraphError,
    GraphInputError,
    GraphMLParseError,
    IntegrityError,
    UnsupportedSchemaError,
)
from friendgraph.graph import MultiGraph, SimpleGraph, build_multigraph, freeze
from friendgraph.cleaner import CleaningStats, clean
from friendgraph.graphml import parse_graphml, write_graphml

__all__ = [
    "CleaningStats",
    "DegenerateGraphError",
    "GraphInputError",
    "GraphMLParseError",
    "IntegrityError",
    "MultiGraph",
    "SimpleGraph",
    "UnsupportedSchemaError",
    "build_multigraph",
    "clean",
    "freeze",
    "parse_graphml",
    "write_graphml",
]

__version__ = "0.1.0"
