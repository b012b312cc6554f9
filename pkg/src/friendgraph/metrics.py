"""Network metrics over a ``SimpleGraph``.

Overall measures (vertex/edge counts, components, geodesics, density) and
per-node measures (degree, PageRank, clustering, eigenvector, betweenness,
closeness) with min/max/average/median summaries.

All-sources traversals (geodesics, closeness, betweenness) split the sources
into a fixed set of contiguous chunks and combine chunk results in chunk
order, so the output does not depend on the number of worker threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.sparse import csgraph

from friendgraph import _kernels
from friendgraph.errors import DegenerateGraphError, GraphInputError
from friendgraph.graph import SimpleGraph

N_CHUNKS = 64
METRIC_NAMES = ("degree", "pagerank", "clustering", "eigenvector", "betweenness", "closeness")


@dataclass(frozen=True)
class SummaryStats:
    minimum: float
    maximum: float
    average: float
    median: float

    def as_dict(self) -> dict:
        return {"min": self.minimum, "max": self.maximum, "average": self.average, "median": self.median}


def summarize(values: Sequence[float]) -> SummaryStats:
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.size == 0:
        raise GraphInputError("cannot summarize an empty sequence")
    arr = np.sort(arr)
    mid = arr.size // 2
    median = arr[mid] if arr.size % 2 else (arr[mid - 1] + arr[mid]) / 2.0
    return SummaryStats(float(arr[0]), float(arr[-1]), float(arr.mean()), float(median))


def _summary_or_none(values: np.ndarray) -> Optional[SummaryStats]:
    return summarize(values) if len(values) else None


@dataclass(frozen=True)
class NodeScores:
    values: np.ndarray
    summary: Optional[SummaryStats]


@dataclass(frozen=True)
class IterativeScores(NodeScores):
    converged: bool
    residual: float
    iterations: int
    degenerate: bool = False


@dataclass(frozen=True)
class BetweennessResult:
    node: np.ndarray
    edge: np.ndarray
    summary: Optional[SummaryStats]
    edge_summary: Optional[SummaryStats]


@dataclass(frozen=True)
class Components:
    labels: np.ndarray
    sizes: np.ndarray

    @property
    def count(self) -> int:
        return len(self.sizes)


@dataclass(frozen=True)
class GeodesicStats:
    diameter: int
    average_geodesic: float
    exact: bool
    empty: bool
    pairs: int

    @property
    def diameter_is_lower_bound(self) -> bool:
        return not self.exact


@dataclass(frozen=True)
class SampledMode:
    sample_size: int
    rng_seed: int = 0

    def __post_init__(self):
        if self.sample_size < 1:
            raise GraphInputError("sample size must be >= 1")

    def __str__(self) -> str:
        return f"sampled:{self.sample_size}"


GeodesicMode = Union[str, SampledMode]


def parse_geodesic_mode(text: str, rng_seed: int = 0) -> GeodesicMode:
    """Parse ``exact`` or ``sampled:K``."""
    if text == "exact":
        return "exact"
    if text.startswith("sampled:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            raise GraphInputError(f"bad sample size in {text!r}") from None
        return SampledMode(k, rng_seed)
    raise GraphInputError(f"unknown geodesic mode {text!r} (expected exact or sampled:K)")


def _default_threads(threads: Optional[int]) -> int:
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise GraphInputError("threads must be >= 1")
    return threads


def _chunked(sources: np.ndarray, fn: Callable, combine: Callable, threads: Optional[int]):
    """Run ``fn`` on fixed source chunks; fold results in chunk order."""
    chunks = [c for c in np.array_split(sources, min(N_CHUNKS, max(len(sources), 1))) if len(c)]
    threads = _default_threads(threads)
    acc = None
    if threads == 1 or len(chunks) <= 1:
        for c in chunks:
            acc = combine(acc, fn(c))
        return acc
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for start in range(0, len(chunks), threads):
            for result in pool.map(fn, chunks[start:start + threads]):
                acc = combine(acc, result)
    return acc


def _bfs_stats(g: SimpleGraph, sources: np.ndarray, threads: Optional[int] = None):
    def fn(chunk):
        return _kernels.bfs_distance_stats(g.indptr, g.indices, chunk)

    def combine(acc, part):
        if acc is None:
            return [part]
        acc.append(part)
        return acc

    parts = _chunked(np.asarray(sources, dtype=np.int64), fn, combine, threads) or []
    if not parts:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(3))


def connected_components(g: SimpleGraph) -> Components:
    """Component labels numbered in order of each component's smallest node index."""
    if g.n == 0:
        return Components(np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    _, raw = csgraph.connected_components(g.adjacency_matrix(), directed=False)
    _, first = np.unique(raw, return_index=True)
    # rank raw labels by first occurrence
    remap = np.empty(len(first), dtype=np.int64)
    remap[np.argsort(first, kind="stable")] = np.arange(len(first), dtype=np.int64)
    labels = remap[raw]
    sizes = np.bincount(labels)
    return Components(labels, sizes)


def geodesic_stats(g: SimpleGraph, mode: GeodesicMode = "exact", threads: Optional[int] = None) -> GeodesicStats:
    """Diameter and mean hop distance over connected unordered pairs.

    Exact mode runs a BFS from every node. Sampled mode runs BFS from
    ``sample_size`` distinct uniformly drawn sources; its diameter is then a
    lower bound.
    """
    if isinstance(mode, str):
        mode = parse_geodesic_mode(mode)
    if isinstance(mode, SampledMode):
        rng = np.random.default_rng(mode.rng_seed)
        k = min(mode.sample_size, g.n)
        sources = np.sort(rng.choice(g.n, size=k, replace=False)) if k else np.zeros(0, dtype=np.int64)
        exact = k == g.n
    else:
        sources = np.arange(g.n, dtype=np.int64)
        exact = True
    dist_sum, reach, ecc = _bfs_stats(g, sources, threads)
    return _geodesics_from_bfs(dist_sum, reach, ecc, exact)


def _geodesics_from_bfs(dist_sum, reach, ecc, exact) -> GeodesicStats:
    pairs = int(reach.sum())
    if pairs == 0:
        return GeodesicStats(0, 0.0, exact, True, 0)
    # every unordered pair is seen from both ends in exact mode; the ratio is unaffected
    return GeodesicStats(int(ecc.max()), int(dist_sum.sum()) / pairs, exact, False, pairs // 2 if exact else pairs)


def degree_all(g: SimpleGraph) -> NodeScores:
    deg = g.degrees.astype(np.int64)
    return NodeScores(deg, _summary_or_none(deg))


def pagerank(g: SimpleGraph, damping: float = 0.85, tol: float = 1e-9, max_iter: int = 200) -> IterativeScores:
    """PageRank by power iteration, scaled so the mean score is 1.

    Each undirected edge counts as a link in both directions. The mass held by
    degree-0 nodes is spread uniformly. Convergence is declared when the L1
    change of the reported (mean-1) scores drops below ``tol``, so the
    tolerance is in the units the caller sees.
    """
    n = g.n
    if n == 0:
        raise GraphInputError("pagerank needs at least one node")
    if not 0.0 <= damping <= 1.0:
        raise GraphInputError("damping must lie in [0, 1]")
    A = g.adjacency_matrix()
    deg = g.degrees.astype(np.float64)
    dangling = deg == 0
    inv_deg = np.zeros(n)
    np.divide(1.0, deg, out=inv_deg, where=~dangling)
    x = np.full(n, 1.0 / n)
    residual = np.inf
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        new = damping * (A @ (x * inv_deg))
        new += (damping * x[dangling].sum() + (1.0 - damping)) / n
        residual = n * float(np.abs(new - x).sum())
        x = new
        if residual < tol:
            converged = True
            break
    scores = x * (n / x.sum())
    return IterativeScores(scores, summarize(scores), converged, residual, it)


def clustering_all(g: SimpleGraph) -> NodeScores:
    """Local clustering coefficient; nodes of degree < 2 score 0."""
    tri = _kernels.triangle_counts(g.indptr, g.indices)
    deg = g.degrees.astype(np.float64)
    pairs = deg * (deg - 1.0)
    coeff = np.zeros(g.n)
    np.divide(2.0 * tri, pairs, out=coeff, where=deg >= 2)
    return NodeScores(coeff, _summary_or_none(coeff))


def triangle_counts(g: SimpleGraph) -> np.ndarray:
    return _kernels.triangle_counts(g.indptr, g.indices)


def eigenvector_centrality(g: SimpleGraph, tol: float = 1e-10, max_iter: int = 1000) -> IterativeScores:
    """Dominant eigenvector of the adjacency matrix, normalized to sum 1.

    Iterates with ``A + I`` (same eigenvectors, and the shift removes the
    sign-flipping oscillation on bipartite graphs). The result is flagged
    degenerate when more than one connected component keeps a share of the
    mass, i.e. the dominant eigenvalue is not simple.
    """
    if g.m == 0:
        raise DegenerateGraphError("eigenvector centrality is undefined for a graph without edges")
    A = g.adjacency_matrix()
    x = np.full(g.n, 1.0 / g.n)
    residual = np.inf
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        new = A @ x + x
        new /= new.sum()
        residual = float(np.abs(new - x).sum())
        x = new
        if residual < tol:
            converged = True
            break
    comps = connected_components(g)
    mass = np.bincount(comps.labels, weights=x, minlength=comps.count)
    degenerate = int((mass > 1e-6).sum()) > 1
    return IterativeScores(x, summarize(x), converged, residual, it, degenerate)


def betweenness(g: SimpleGraph, threads: Optional[int] = None) -> BetweennessResult:
    """Unnormalized node and edge betweenness (Brandes), unordered pairs counted once."""
    n, m = g.n, g.m
    if n == 0:
        return BetweennessResult(np.zeros(0), np.zeros(0), None, None)
    slot_edge = g.slot_edge_ids()

    def fn(chunk):
        return _kernels.brandes_accumulate(g.indptr, g.indices, slot_edge, m, chunk)

    def combine(acc, part):
        if acc is None:
            return part[0].copy(), part[1].copy()
        acc[0][:] += part[0]
        acc[1][:] += part[1]
        return acc

    node_bc, edge_bc = _chunked(np.arange(n, dtype=np.int64), fn, combine, threads)
    node_bc /= 2.0
    edge_bc /= 2.0
    return BetweennessResult(node_bc, edge_bc, summarize(node_bc), _summary_or_none(edge_bc))


def closeness(g: SimpleGraph, threads: Optional[int] = None) -> NodeScores:
    """1 / (sum of distances to reachable nodes); isolated nodes score 0."""
    dist_sum, _, _ = _bfs_stats(g, np.arange(g.n, dtype=np.int64), threads)
    return _closeness_from_bfs(dist_sum)


def _closeness_from_bfs(dist_sum: np.ndarray) -> NodeScores:
    values = np.zeros(len(dist_sum))
    np.divide(1.0, dist_sum, out=values, where=dist_sum > 0)
    return NodeScores(values, _summary_or_none(values))


@dataclass(frozen=True)
class OverallMetrics:
    vertices: int
    unique_edges: int
    edges_with_duplicates: int
    total_edges: int
    self_loops: int
    connected_components: int
    single_vertex_components: int
    max_vertices_in_component: int
    max_edges_in_component: int
    diameter: int
    average_geodesic: float
    density: float
    geodesic_mode: str = "exact"
    diameter_is_lower_bound: bool = False
    graph_type: str = "Undirected"

    def as_dict(self) -> dict:
        return {
            "graph_type": self.graph_type,
            "vertices": self.vertices,
            "unique_edges": self.unique_edges,
            "edges_with_duplicates": self.edges_with_duplicates,
            "total_edges": self.total_edges,
            "self_loops": self.self_loops,
            "connected_components": self.connected_components,
            "single_vertex_components": self.single_vertex_components,
            "max_vertices_in_component": self.max_vertices_in_component,
            "max_edges_in_component": self.max_edges_in_component,
            "diameter": self.diameter,
            "average_geodesic": self.average_geodesic,
            "density": self.density,
            "geodesic_mode": self.geodesic_mode,
            "diameter_is_lower_bound": self.diameter_is_lower_bound,
        }


def _overall(g: SimpleGraph, comps: Components, geo: GeodesicStats, mode: GeodesicMode, cleaning=None) -> OverallMetrics:
    n, m = g.n, g.m
    duplicates = cleaning.parallel_edges_removed if cleaning is not None else 0
    loops = cleaning.self_loops_removed if cleaning is not None else 0
    if comps.count:
        eu, _ = g.edge_index_arrays()
        comp_edges = np.bincount(comps.labels[eu], minlength=comps.count)
        max_vertices = int(comps.sizes.max())
        max_edges = int(comp_edges.max())
    else:
        max_vertices = max_edges = 0
    density = 2.0 * m / (n * (n - 1)) if n >= 2 else 0.0
    return OverallMetrics(
        vertices=n,
        unique_edges=m,
        edges_with_duplicates=duplicates,
        total_edges=m + duplicates + loops,
        self_loops=loops,
        connected_components=comps.count,
        single_vertex_components=int((comps.sizes == 1).sum()),
        max_vertices_in_component=max_vertices,
        max_edges_in_component=max_edges,
        diameter=geo.diameter,
        average_geodesic=geo.average_geodesic,
        density=density,
        geodesic_mode=str(mode),
        diameter_is_lower_bound=geo.diameter_is_lower_bound,
    )


def overall_metrics(
    g: SimpleGraph, geodesic_mode: GeodesicMode = "exact", threads: Optional[int] = None, cleaning=None
) -> OverallMetrics:
    """Table of whole-graph measures.

    ``cleaning`` (a ``CleaningStats``) fills the duplicate-edge and self-loop
    counts of the raw input; without it they are 0, as for any simple graph.
    """
    if isinstance(geodesic_mode, str):
        geodesic_mode = parse_geodesic_mode(geodesic_mode)
    geo = geodesic_stats(g, geodesic_mode, threads)
    return _overall(g, connected_components(g), geo, geodesic_mode, cleaning)


@dataclass(frozen=True)
class NodeMetricsTable:
    """Per-node metric columns aligned with ``ids`` (dense-index order)."""

    ids: tuple
    columns: dict

    def __getitem__(self, metric: str) -> np.ndarray:
        try:
            return self.columns[metric]
        except KeyError:
            raise GraphInputError(f"unknown metric {metric!r}; expected one of {', '.join(METRIC_NAMES)}") from None


@dataclass(frozen=True)
class MetricsReport:
    overall: OverallMetrics
    summaries: dict
    table: NodeMetricsTable
    edge_betweenness: np.ndarray
    convergence: dict

    def as_dict(self) -> dict:
        return {
            "overall": self.overall.as_dict(),
            "summaries": {name: (s.as_dict() if s else None) for name, s in self.summaries.items()},
            "convergence": self.convergence,
        }


def analyze(
    g: SimpleGraph, geodesic_mode: GeodesicMode = "exact", threads: Optional[int] = None, cleaning=None
) -> MetricsReport:
    """Compute the full metric suite in one go."""
    if isinstance(geodesic_mode, str):
        geodesic_mode = parse_geodesic_mode(geodesic_mode)
    all_sources = np.arange(g.n, dtype=np.int64)
    dist_sum, reach, ecc = _bfs_stats(g, all_sources, threads)
    if isinstance(geodesic_mode, SampledMode):
        geo = geodesic_stats(g, geodesic_mode, threads)
    else:
        geo = _geodesics_from_bfs(dist_sum, reach, ecc, True)
    overall = _overall(g, connected_components(g), geo, geodesic_mode, cleaning)

    columns = {}
    summaries = {}
    convergence = {}
    deg = degree_all(g)
    columns["degree"], summaries["degree"] = deg.values, deg.summary
    if g.n:
        pr = pagerank(g)
        columns["pagerank"], summaries["pagerank"] = pr.values, pr.summary
        convergence["pagerank"] = {"converged": pr.converged, "residual": pr.residual, "iterations": pr.iterations}
    else:
        columns["pagerank"], summaries["pagerank"] = np.zeros(0), None
    cc = clustering_all(g)
    columns["clustering"], summaries["clustering"] = cc.values, cc.summary
    try:
        ev = eigenvector_centrality(g)
        columns["eigenvector"], summaries["eigenvector"] = ev.values, ev.summary
        convergence["eigenvector"] = {
            "converged": ev.converged, "residual": ev.residual, "iterations": ev.iterations, "degenerate": ev.degenerate,
        }
    except DegenerateGraphError:
        zeros = np.zeros(g.n)
        columns["eigenvector"], summaries["eigenvector"] = zeros, _summary_or_none(zeros)
        convergence["eigenvector"] = {"converged": False, "residual": None, "iterations": 0, "degenerate": True}
    bc = betweenness(g, threads)
    columns["betweenness"], summaries["betweenness"] = bc.node, bc.summary
    cl = _closeness_from_bfs(dist_sum)
    columns["closeness"], summaries["closeness"] = cl.values, cl.summary
    summaries["edge_betweenness"] = bc.edge_summary
    return MetricsReport(overall, summaries, NodeMetricsTable(g.ids, columns), bc.edge, convergence)
