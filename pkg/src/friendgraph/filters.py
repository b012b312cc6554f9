"""Metric-driven node selection and induced subgraphs."""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from friendgraph.errors import GraphInputError
from friendgraph.graph import SimpleGraph
from friendgraph.metrics import METRIC_NAMES, NodeMetricsTable, connected_components


@dataclass(frozen=True)
class FilterSpec:
    """One of three selection modes.

    ``top_k``: the ``k`` highest-scoring nodes. ``threshold``: nodes whose
    score compares ``>=`` (or ``<=``) to ``cutoff``. ``giant_component``: the
    largest connected component (metric unused).
    """

    mode: str
    metric: Optional[str] = None
    k: Optional[int] = None
    cutoff: Optional[float] = None
    direction: str = ">="

    def __post_init__(self):
        if self.mode not in ("top_k", "threshold", "giant_component"):
            raise GraphInputError(f"unknown filter mode {self.mode!r}")
        if self.mode != "giant_component" and self.metric not in METRIC_NAMES:
            raise GraphInputError(f"unknown metric {self.metric!r}; expected one of {', '.join(METRIC_NAMES)}")
        if self.mode == "top_k" and (self.k is None or self.k < 1):
            raise GraphInputError("top_k needs k >= 1")
        if self.mode == "threshold":
            if self.cutoff is None or not math.isfinite(self.cutoff):
                raise GraphInputError("threshold needs a finite cutoff")
            if self.direction not in (">=", "<="):
                raise GraphInputError("direction must be '>=' or '<='")

    @classmethod
    def top_k(cls, metric: str, k: int) -> "FilterSpec":
        return cls("top_k", metric=metric, k=k)

    @classmethod
    def threshold(cls, metric: str, cutoff: float, direction: str = ">=") -> "FilterSpec":
        return cls("threshold", metric=metric, cutoff=cutoff, direction=direction)

    @classmethod
    def giant_component(cls) -> "FilterSpec":
        return cls("giant_component")


def _aligned_column(g: SimpleGraph, table: NodeMetricsTable, metric: str) -> np.ndarray:
    column = table[metric]
    if tuple(table.ids) == g.ids:
        return np.asarray(column, dtype=np.float64)
    lookup = dict(zip(table.ids, np.asarray(column, dtype=np.float64).tolist()))
    try:
        return np.array([lookup[nid] for nid in g.ids], dtype=np.float64)
    except KeyError as exc:
        raise GraphInputError(f"metrics table has no row for node {exc.args[0]!r}") from None


def select_nodes(g: SimpleGraph, table: NodeMetricsTable, spec: FilterSpec) -> list[str]:
    """Return the selected node ids in dense-index order."""
    if spec.mode == "giant_component":
        comps = connected_components(g)
        if comps.count == 0:
            return []
        giant = int(np.argmax(comps.sizes))  # argmax keeps the smallest id among ties
        return [g.ids[i] for i in np.flatnonzero(comps.labels == giant)]

    values = _aligned_column(g, table, spec.metric)
    if spec.mode == "top_k":
        # ids are sorted, so a stable sort on -value breaks ties by ascending id
        order = np.argsort(-values, kind="stable")[: spec.k]
        chosen = np.sort(order)
    else:
        cmp = operator.ge if spec.direction == ">=" else operator.le
        chosen = np.flatnonzero(cmp(values, spec.cutoff))
    return [g.ids[i] for i in chosen]


def induced_subgraph(g: SimpleGraph, nodes: Iterable[str]) -> SimpleGraph:
    """Subgraph on ``nodes`` with every edge of ``g`` between two kept nodes."""
    keep = np.zeros(g.n, dtype=bool)
    for node_id in nodes:
        keep[g.index_of(node_id)] = True
    old = np.flatnonzero(keep)
    new_index = np.full(g.n, -1, dtype=np.int64)
    new_index[old] = np.arange(len(old), dtype=np.int64)
    eu, ev = g.edge_index_arrays()
    mask = keep[eu] & keep[ev]
    # keeping sorted ids keeps the (u, v) edge order canonical as well
    return SimpleGraph.from_index_edges([g.ids[i] for i in old], new_index[eu[mask]], new_index[ev[mask]])
