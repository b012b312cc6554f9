"""Synthetic ground-truth networks and a depth-limited BFS friend-list crawler.

The crawler reads the friend list of a profile only if the profile is the
seed, a direct friend of the seed, or public, and only while the profile sits
above the depth limit. Page-kind entities are never recorded. Friendships seen
from both endpoints are recorded twice, so raw output carries duplicate node
records and parallel edges until it is cleaned.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from friendgraph.errors import GraphInputError
from friendgraph.graph import MultiGraph, SimpleGraph

MODELS = ("preferential_attachment", "random_uniform", "small_world")
_MODEL_ALIASES = {"ba": "preferential_attachment", "er": "random_uniform", "ws": "small_world"}


@dataclass(frozen=True)
class GeneratorSpec:
    model: str
    n: int
    m_links: float = 2.0
    edge_prob: float = 0.0
    k_neighbors: int = 4
    rewire_prob: float = 0.1
    public_fraction: float = 1.0
    page_fraction: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "model", _MODEL_ALIASES.get(self.model, self.model))
        if self.model not in MODELS:
            raise GraphInputError(f"unknown model {self.model!r}")
        if self.n < 0:
            raise GraphInputError("node count must be >= 0")
        for name in ("public_fraction", "page_fraction", "edge_prob", "rewire_prob"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise GraphInputError(f"{name} must lie in [0, 1]")
        if self.model == "preferential_attachment":
            if self.m_links < 1:
                raise GraphInputError("preferential attachment needs m_links >= 1")
            if math.ceil(self.m_links) >= self.n:
                raise GraphInputError(f"m_links={self.m_links} is infeasible for n={self.n}")
        if self.model == "small_world":
            if self.k_neighbors < 2 or self.k_neighbors % 2:
                raise GraphInputError("k_neighbors must be an even number >= 2")
            if self.k_neighbors >= self.n:
                raise GraphInputError(f"k_neighbors={self.k_neighbors} is infeasible for n={self.n}")


@dataclass(frozen=True)
class TruthNetwork:
    graph: SimpleGraph
    public: np.ndarray
    page: np.ndarray

    def kind(self, i: int) -> str:
        return "page" if self.page[i] else "user"

    def meta(self) -> dict:
        return {
            nid: {"public": bool(self.public[i]), "kind": self.kind(i)} for i, nid in enumerate(self.graph.ids)
        }

    def meta_json(self) -> str:
        return json.dumps(self.meta(), indent=1) + "\n"

    @classmethod
    def from_meta(cls, graph: SimpleGraph, meta: dict) -> "TruthNetwork":
        public = np.zeros(graph.n, dtype=bool)
        page = np.zeros(graph.n, dtype=bool)
        for i, nid in enumerate(graph.ids):
            try:
                entry = meta[nid]
            except KeyError:
                raise GraphInputError(f"metadata has no entry for node {nid!r}") from None
            kind = entry.get("kind", "user")
            if kind not in ("user", "page"):
                raise GraphInputError(f"node {nid!r}: unknown kind {kind!r}")
            public[i] = bool(entry.get("public", False))
            page[i] = kind == "page"
        return cls(graph, public, page)


class _Uniform:
    """Buffered uniform draws from a numpy Generator."""

    def __init__(self, rng: np.random.Generator, block: int = 1 << 16):
        self.rng = rng
        self.block = block
        self.buf = rng.random(block)
        self.pos = 0

    def __call__(self) -> float:
        if self.pos == self.block:
            self.buf = self.rng.random(self.block)
            self.pos = 0
        x = self.buf[self.pos]
        self.pos += 1
        return float(x)


def _preferential_attachment(n: int, m_links: float, rng: np.random.Generator):
    """Seed clique of ceil(m)+1 nodes; each later node links to floor(m) or
    ceil(m) distinct earlier nodes (the fractional part is the probability of
    the extra link), chosen with probability proportional to degree."""
    m_low = math.floor(m_links)
    frac = m_links - m_low
    m0 = math.ceil(m_links) + 1
    uniform = _Uniform(rng)
    edges: list[tuple[int, int]] = []
    repeated: list[int] = []
    for i in range(m0):
        for j in range(i + 1, m0):
            edges.append((i, j))
            repeated.extend((i, j))
    for v in range(m0, n):
        k = m_low + (1 if frac and uniform() < frac else 0)
        targets: list[int] = []
        while len(targets) < k:
            t = repeated[int(uniform() * len(repeated))]
            if t not in targets:
                targets.append(t)
        for t in targets:
            edges.append((t, v))
            repeated.extend((t, v))
    return edges


def _random_uniform(n: int, p: float, rng: np.random.Generator):
    """G(n, p) by geometric skipping over the lower triangle, O(n + m)."""
    edges = []
    if p <= 0 or n < 2:
        return edges
    if p >= 1:
        return [(w, v) for v in range(n) for w in range(v)]
    uniform = _Uniform(rng)
    log_q = math.log1p(-p)
    v, w = 1, -1
    while v < n:
        w += 1 + int(math.log1p(-uniform()) / log_q)
        while w >= v and v < n:
            w -= v
            v += 1
        if v < n:
            edges.append((w, v))
    return edges


def _small_world(n: int, k: int, p: float, rng: np.random.Generator):
    """Watts-Strogatz ring lattice with per-edge rewiring of the far endpoint."""
    uniform = _Uniform(rng)
    adj = [set() for _ in range(n)]
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            if v not in adj[u] or uniform() >= p:
                continue
            if len(adj[u]) >= n - 1:
                continue
            w = int(uniform() * n)
            while w == u or w in adj[u]:
                w = int(uniform() * n)
            adj[u].discard(v)
            adj[v].discard(u)
            adj[u].add(w)
            adj[w].add(u)
    return [(u, v) for u in range(n) for v in adj[u] if u < v]


def node_labels(n: int) -> list[str]:
    """Zero-padded decimal ids, so lexicographic order equals numeric order."""
    width = len(str(max(n - 1, 0)))
    return [f"{i:0{width}d}" for i in range(n)]


def generate(spec: GeneratorSpec) -> TruthNetwork:
    rng = np.random.default_rng(spec.rng_seed)
    if spec.model == "preferential_attachment":
        edges = _preferential_attachment(spec.n, spec.m_links, rng)
    elif spec.model == "random_uniform":
        edges = _random_uniform(spec.n, spec.edge_prob, rng)
    else:
        edges = _small_world(spec.n, spec.k_neighbors, spec.rewire_prob, rng)
    arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    u = np.minimum(arr[:, 0], arr[:, 1])
    v = np.maximum(arr[:, 0], arr[:, 1])
    graph = SimpleGraph.from_index_edges(node_labels(spec.n), u, v)
    public = rng.random(spec.n) < spec.public_fraction
    page = rng.random(spec.n) < spec.page_fraction
    return TruthNetwork(graph, public, page)


@dataclass(frozen=True)
class CrawlConfig:
    seed_node: str
    max_depth: int = 3
    emit_duplicates: bool = True

    def __post_init__(self):
        if self.max_depth < 0:
            raise GraphInputError("max_depth must be >= 0")


def readable(truth: TruthNetwork, i: int, seed: int, seed_friends: set) -> bool:
    return i == seed or i in seed_friends or bool(truth.public[i])


def crawl(truth: TruthNetwork, cfg: CrawlConfig) -> MultiGraph:
    """Breadth-first crawl from ``cfg.seed_node``; returns raw observations.

    A node's friend list is read at most once, when the node is dequeued,
    provided its BFS depth is below ``max_depth`` and it is readable.
    """
    g = truth.graph
    if cfg.seed_node not in g:
        raise GraphInputError(f"seed {cfg.seed_node!r} is not in the network")
    seed = g.index_of(cfg.seed_node)
    if truth.page[seed]:
        raise GraphInputError(f"seed {cfg.seed_node!r} is a page, not a user")
    seed_friends = set(g.neighbors(seed).tolist())
    ids = g.ids
    page = truth.page

    nodes = [ids[seed]]
    edges = []
    seen_nodes = {seed}
    seen_edges = set()
    depth = {seed: 0}
    queue = deque([seed])
    while queue:
        v = queue.popleft()
        dv = depth[v]
        if dv >= cfg.max_depth or not readable(truth, v, seed, seed_friends):
            continue
        for f in g.neighbors(v).tolist():
            if page[f]:
                continue
            if f not in depth:
                depth[f] = dv + 1
                queue.append(f)
            if cfg.emit_duplicates:
                nodes.append(ids[f])
                edges.append((ids[v], ids[f]))
            else:
                if f not in seen_nodes:
                    seen_nodes.add(f)
                    nodes.append(ids[f])
                key = (v, f) if v < f else (f, v)
                if key not in seen_edges:
                    seen_edges.add(key)
                    edges.append((ids[v], ids[f]))
    return MultiGraph(nodes, edges)


@dataclass(frozen=True)
class CoverageReport:
    node_recall: float
    edge_recall: float
    truth_degree_counts: np.ndarray
    observed_degree_counts: np.ndarray

    def as_dict(self) -> dict:
        return {
            "node_recall": self.node_recall,
            "edge_recall": self.edge_recall,
            "degree_counts": {
                "truth": self.truth_degree_counts.tolist(),
                "observed": self.observed_degree_counts.tolist(),
            },
        }


def crawl_coverage(truth: TruthNetwork, observed: SimpleGraph) -> CoverageReport:
    """Recall of ``observed`` against the user-kind part of the truth network.

    Degree counts are indexed by degree, padded to a common length.
    """
    g = truth.graph
    for nid in observed.ids:
        if nid not in g:
            raise GraphInputError(f"observed node {nid!r} is not in the truth network")
    users = ~truth.page
    eu, ev = g.edge_index_arrays()
    user_edges = users[eu] & users[ev]
    n_users = int(users.sum())
    n_user_edges = int(user_edges.sum())

    obs_idx = np.array([g.index_of(nid) for nid in observed.ids], dtype=np.int64)
    node_hits = int(users[obs_idx].sum()) if len(obs_idx) else 0
    truth_keys = set((eu[user_edges] * g.n + ev[user_edges]).tolist())
    ou, ov = observed.edge_index_arrays()
    if len(ou):
        a, b = obs_idx[ou], obs_idx[ov]
        obs_keys = (np.minimum(a, b) * g.n + np.maximum(a, b)).tolist()
        edge_hits = sum(1 for key in obs_keys if key in truth_keys)
    else:
        edge_hits = 0

    user_deg = np.bincount(np.concatenate([eu[user_edges], ev[user_edges]]), minlength=g.n)[users]
    obs_deg = observed.degrees
    length = int(max(user_deg.max(initial=0), obs_deg.max(initial=0))) + 1
    return CoverageReport(
        node_recall=node_hits / n_users if n_users else 1.0,
        edge_recall=edge_hits / n_user_edges if n_user_edges else 1.0,
        truth_degree_counts=np.bincount(user_deg, minlength=length),
        observed_degree_counts=np.bincount(obs_deg, minlength=length),
    )
