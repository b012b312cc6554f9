"""Graph data model.

``MultiGraph`` holds raw records exactly as crawled or parsed (duplicate node
records, parallel edges and self-loops allowed). ``SimpleGraph`` is the frozen,
cleaned form every metric consumes: a CSR adjacency over dense indices that
follow the lexicographic order of the node ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from friendgraph.errors import GraphInputError, IntegrityError

NodeId = str


def _check_id(node_id) -> NodeId:
    if not isinstance(node_id, str):
        raise GraphInputError(f"node id must be a string, got {type(node_id).__name__}")
    if not node_id:
        raise GraphInputError("empty node id")
    return node_id


@dataclass
class MultiGraph:
    """Raw undirected multigraph; records are kept in insertion order."""

    nodes: list[NodeId] = field(default_factory=list)
    edges: list[tuple[NodeId, NodeId]] = field(default_factory=list)

    @property
    def n_records(self) -> int:
        return len(self.nodes)

    @property
    def e_records(self) -> int:
        return len(self.edges)


class MultiGraphBuilder:
    """Single-writer accumulator that auto-registers unseen edge endpoints."""

    def __init__(self):
        self._nodes: list[NodeId] = []
        self._edges: list[tuple[NodeId, NodeId]] = []
        self._seen: set[NodeId] = set()

    def add_node(self, node_id: NodeId) -> None:
        _check_id(node_id)
        self._nodes.append(node_id)
        self._seen.add(node_id)

    def add_edge(self, a: NodeId, b: NodeId) -> None:
        _check_id(a)
        _check_id(b)
        self._edges.append((a, b))

    def build(self) -> MultiGraph:
        nodes = list(self._nodes)
        seen = set(self._seen)
        for a, b in self._edges:
            if a not in seen:
                seen.add(a)
                nodes.append(a)
            if b not in seen:
                seen.add(b)
                nodes.append(b)
        return MultiGraph(nodes, list(self._edges))


def build_multigraph(
    node_records: Iterable[NodeId], edge_records: Iterable[tuple[NodeId, NodeId]]
) -> MultiGraph:
    builder = MultiGraphBuilder()
    for node_id in node_records:
        builder.add_node(node_id)
    for a, b in edge_records:
        builder.add_edge(a, b)
    return builder.build()


class SimpleGraph:
    """Immutable undirected simple graph in compressed sparse row form.

    ``ids[i]`` is the node id of dense index ``i``; ids are sorted, so the dense
    numbering is reproducible from the node set alone. ``indptr``/``indices``
    follow the scipy CSR convention with every neighbor list strictly
    increasing.
    """

    __slots__ = ("ids", "indptr", "indices", "_index", "_csr", "_edge_cache")

    def __init__(self, ids: Sequence[NodeId], indptr: np.ndarray, indices: np.ndarray):
        self.ids: tuple[NodeId, ...] = tuple(ids)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False
        self._index = None
        self._csr = None
        self._edge_cache = None

    @classmethod
    def from_index_edges(cls, ids: Sequence[NodeId], u: np.ndarray, v: np.ndarray) -> "SimpleGraph":
        """Build from sorted unique ``ids`` and edge endpoint index arrays.

        The edge list must already be simple (no loops, no repeats in either
        orientation); callers validate before getting here.
        """
        n = len(ids)
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.lexsort((dst, src))
        src = src[order]
        dst = dst[order]
        counts = np.bincount(src, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return cls(ids, indptr, dst)

    @classmethod
    def empty(cls) -> "SimpleGraph":
        return cls((), np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def index_of(self, node_id: NodeId) -> int:
        if self._index is None:
            self._index = {nid: i for i, nid in enumerate(self.ids)}
        try:
            return self._index[node_id]
        except KeyError:
            raise GraphInputError(f"unknown node id {node_id!r}") from None

    def __contains__(self, node_id) -> bool:
        try:
            self.index_of(node_id)
        except GraphInputError:
            return False
        return True

    def has_edge(self, a: NodeId, b: NodeId) -> bool:
        i, j = self.index_of(a), self.index_of(b)
        row = self.neighbors(i)
        k = np.searchsorted(row, j)
        return bool(k < len(row) and row[k] == j)

    def _edges(self):
        if self._edge_cache is None:
            rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
            upper = self.indices > rows
            eu = rows[upper]
            ev = self.indices[upper]
            # CSR slot -> edge number; upper slots are already in (u, v) order.
            slot_edge = np.empty(len(self.indices), dtype=np.int64)
            slot_edge[upper] = np.arange(len(eu), dtype=np.int64)
            lower = ~upper
            keys = eu * max(self.n, 1) + ev
            lk = self.indices[lower] * max(self.n, 1) + rows[lower]
            slot_edge[lower] = np.searchsorted(keys, lk)
            for arr in (eu, ev, slot_edge):
                arr.flags.writeable = False
            self._edge_cache = (eu, ev, slot_edge)
        return self._edge_cache

    def edge_index_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Edges as ``(u, v)`` index arrays with ``u < v``, sorted by ``(u, v)``."""
        eu, ev, _ = self._edges()
        return eu, ev

    def slot_edge_ids(self) -> np.ndarray:
        """Edge number for every CSR slot (both orientations of an edge share it)."""
        return self._edges()[2]

    def edge_list(self) -> list[tuple[NodeId, NodeId]]:
        eu, ev = self.edge_index_arrays()
        ids = self.ids
        return [(ids[a], ids[b]) for a, b in zip(eu.tolist(), ev.tolist())]

    def edge_set(self) -> set[frozenset]:
        return {frozenset(e) for e in self.edge_list()}

    def adjacency_matrix(self) -> sp.csr_matrix:
        if self._csr is None:
            data = np.ones(len(self.indices), dtype=np.float64)
            self._csr = sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))
        return self._csr

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return (
            self.ids == other.ids
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash((self.ids, self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.m})"


def freeze(g: MultiGraph) -> SimpleGraph:
    """Freeze a cleaned multigraph into a ``SimpleGraph``.

    Raises ``IntegrityError`` on the first duplicate node record, self-loop,
    parallel edge or undeclared endpoint.
    """
    index: dict[NodeId, int] = {}
    for node_id in g.nodes:
        _check_id(node_id)
        if node_id in index:
            raise IntegrityError(f"duplicate node record {node_id!r}")
        index[node_id] = 0
    ids = sorted(index)
    for i, node_id in enumerate(ids):
        index[node_id] = i

    m = len(g.edges)
    u = np.empty(m, dtype=np.int64)
    v = np.empty(m, dtype=np.int64)
    for k, (a, b) in enumerate(g.edges):
        try:
            ia, ib = index[a], index[b]
        except KeyError as exc:
            raise IntegrityError(f"edge ({a!r}, {b!r}) references undeclared node {exc.args[0]!r}") from None
        if ia == ib:
            raise IntegrityError(f"self-loop on {a!r}")
        u[k], v[k] = (ia, ib) if ia < ib else (ib, ia)

    n = len(ids)
    keys = u * max(n, 1) + v
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    dup = np.flatnonzero(sorted_keys[1:] == sorted_keys[:-1])
    if len(dup):
        a, b = g.edges[order[dup[0] + 1]]
        raise IntegrityError(f"parallel edge ({a!r}, {b!r})")
    return SimpleGraph.from_index_edges(ids, u[order], v[order])


def graph_from_edges(edges: Iterable[tuple[NodeId, NodeId]], nodes: Iterable[NodeId] = ()) -> SimpleGraph:
    """Convenience: clean and freeze arbitrary edge records in one step."""
    from friendgraph.cleaner import clean

    cleaned, _ = clean(build_multigraph(nodes, edges))
    return freeze(cleaned)
