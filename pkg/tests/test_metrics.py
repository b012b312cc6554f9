import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from friendgraph import DegenerateGraphError, GraphInputError, freeze
from friendgraph.graph import MultiGraph, SimpleGraph, graph_from_edges
from friendgraph import metrics as M

import oracles


def path(n):
    names = "abcdefghij"[:n]
    return graph_from_edges(list(zip(names, names[1:])))


def complete(n):
    return graph_from_edges(itertools.combinations([f"k{i}" for i in range(n)], 2))


def star(leaves):
    return graph_from_edges([("s", f"l{i}") for i in range(leaves)])


def cycle(n):
    ids = [f"c{i:02d}" for i in range(n)]
    return graph_from_edges([(ids[i], ids[(i + 1) % n]) for i in range(n)])


def by_id(g, values):
    return dict(zip(g.ids, np.asarray(values).tolist()))


# summarize

def test_summarize_odd_and_even():
    assert M.summarize([1, 2, 3]) == M.SummaryStats(1, 3, 2, 2)
    assert M.summarize([4, 1, 3, 2]).median == 2.5


def test_summarize_empty():
    with pytest.raises(GraphInputError):
        M.summarize([])


def test_summarize_matches_sort_oracle():
    rng = np.random.default_rng(0)
    values = rng.random(10_000)
    s = sorted(values.tolist())
    stats = M.summarize(values)
    assert stats.minimum == s[0] and stats.maximum == s[-1]
    assert stats.median == (s[4999] + s[5000]) / 2
    assert stats.average == pytest.approx(math.fsum(s) / len(s), abs=1e-12)


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50))
def test_summary_ordering(values):
    s = M.summarize(values)
    eps = 1e-9 * max(1.0, abs(s.minimum), abs(s.maximum))
    assert s.minimum <= s.median <= s.maximum
    assert s.minimum - eps <= s.average <= s.maximum + eps


# components

def test_components_two_edges():
    c = M.connected_components(graph_from_edges([("a", "b"), ("c", "d")]))
    assert c.count == 2 and c.sizes.tolist() == [2, 2]
    assert c.labels.tolist() == [0, 0, 1, 1]


def test_components_empty():
    assert M.connected_components(SimpleGraph.empty()).count == 0


def test_components_match_flood_fill():
    ids, edges = oracles.random_edges(random.Random(3), 200, 0.008)
    g = freeze(MultiGraph(ids, edges))
    labels = oracles.flood_fill_components(oracles.adjacency(ids, edges), list(g.ids))
    assert M.connected_components(g).labels.tolist() == [labels[v] for v in g.ids]


# geodesics

def test_geodesics_path():
    geo = M.geodesic_stats(path(4))
    assert geo.diameter == 3
    assert geo.average_geodesic == pytest.approx(5 / 3, abs=1e-15)
    assert geo.exact and not geo.empty


def test_geodesics_k5():
    geo = M.geodesic_stats(complete(5))
    assert (geo.diameter, geo.average_geodesic) == (1, 1.0)


@pytest.mark.parametrize("g", [SimpleGraph.empty(), freeze(MultiGraph(["a", "b"], []))])
def test_geodesics_empty_flag(g):
    geo = M.geodesic_stats(g)
    assert geo.empty and geo.diameter == 0 and geo.average_geodesic == 0.0


def test_geodesics_random_connected_matches_floyd_warshall():
    ids, edges = oracles.random_connected_edges(random.Random(8), 150, 0.01)
    g = freeze(MultiGraph(ids, edges))
    diameter, average = oracles.geodesics_oracle(ids, edges)
    geo = M.geodesic_stats(g)
    assert geo.diameter == diameter
    assert geo.average_geodesic == pytest.approx(average, abs=1e-12)


def test_sampled_geodesics():
    ids, edges = oracles.random_connected_edges(random.Random(8), 150, 0.01)
    g = freeze(MultiGraph(ids, edges))
    exact = M.geodesic_stats(g)
    sampled = M.geodesic_stats(g, M.SampledMode(20, rng_seed=4))
    assert sampled.diameter_is_lower_bound and sampled.diameter <= exact.diameter
    assert M.geodesic_stats(g, M.SampledMode(20, 4)) == sampled
    full = M.geodesic_stats(g, M.SampledMode(1000, 4))
    assert full.exact and full.diameter == exact.diameter
    assert full.average_geodesic == pytest.approx(exact.average_geodesic, abs=1e-12)


def test_geodesic_mode_parsing():
    assert M.parse_geodesic_mode("exact") == "exact"
    assert M.parse_geodesic_mode("sampled:7", 3) == M.SampledMode(7, 3)
    for bad in ("sampled:x", "sampled:0", "fast"):
        with pytest.raises(GraphInputError):
            M.parse_geodesic_mode(bad)


# degree

def test_degree_path():
    d = M.degree_all(path(3))
    assert d.values.tolist() == [1, 2, 1]
    assert d.summary == M.SummaryStats(1, 2, 4 / 3, 1)


def test_degree_k4_and_ba():
    assert M.degree_all(complete(4)).values.tolist() == [3] * 4
    from friendgraph.crawl import GeneratorSpec, generate

    g = generate(GeneratorSpec("ba", 300, m_links=3, rng_seed=2)).graph
    assert int(M.degree_all(g).values.sum()) == 2 * len(g.edge_list())


# pagerank

def test_pagerank_cycle_exactly_one():
    pr = M.pagerank(cycle(4))
    assert np.allclose(pr.values, 1.0, atol=1e-12, rtol=0)
    assert pr.converged


def test_pagerank_star_matches_dense_oracle():
    g = star(4)
    oracle = oracles.pagerank_oracle(list(g.ids), g.edge_list())
    pr = M.pagerank(g, tol=1e-14, max_iter=10_000)
    np.testing.assert_allclose(pr.values, oracle, atol=1e-8, rtol=0)
    assert pr.summary.average == pytest.approx(1.0, abs=1e-12)


def test_pagerank_dangling_nodes():
    g = freeze(MultiGraph(["a", "b", "c", "d"], [("a", "b"), ("b", "c")]))
    pr = M.pagerank(g, tol=1e-14, max_iter=10_000)
    np.testing.assert_allclose(pr.values, oracles.pagerank_oracle(list(g.ids), g.edge_list()), atol=1e-8, rtol=0)
    assert np.all(pr.values > 0)


def test_pagerank_non_convergence_flag():
    pr = M.pagerank(star(5), max_iter=2)
    assert not pr.converged and pr.iterations == 2 and pr.residual > 0


# clustering

def test_clustering_triangle_and_star():
    assert M.clustering_all(complete(3)).values.tolist() == [1.0, 1.0, 1.0]
    assert M.clustering_all(star(5)).values.tolist() == [0.0] * 6


def test_clustering_random_matches_triangle_enumeration():
    ids, edges = oracles.random_edges(random.Random(1), 50, 0.2)
    g = freeze(MultiGraph(ids, edges))
    expected = oracles.clustering_oracle(ids, edges)
    got = by_id(g, M.clustering_all(g).values)
    for v in ids:
        assert got[v] == pytest.approx(expected[v], abs=1e-12)
    tri = by_id(g, M.triangle_counts(g))
    assert tri == oracles.triangle_oracle(ids, edges)


# eigenvector

def test_eigenvector_k3():
    ev = M.eigenvector_centrality(complete(3))
    np.testing.assert_allclose(ev.values, 1 / 3, atol=1e-12)
    assert not ev.degenerate


def test_eigenvector_path_matches_dense_oracle():
    ev = M.eigenvector_centrality(path(3))
    # dominant eigenvector of the 3-path is (1, sqrt2, 1) normalized to sum 1
    expected = np.array([1.0, math.sqrt(2.0), 1.0]) / (2.0 + math.sqrt(2.0))
    np.testing.assert_allclose(ev.values, expected, atol=1e-9)
    np.testing.assert_allclose(ev.values, oracles.eigenvector_oracle(list("abc"), [("a", "b"), ("b", "c")]), atol=1e-9)
    assert ev.values[1] == pytest.approx(0.41421356237, abs=1e-9)


def test_eigenvector_two_triangles_degenerate():
    g = graph_from_edges([("a", "b"), ("b", "c"), ("a", "c"), ("x", "y"), ("y", "z"), ("x", "z")])
    ev = M.eigenvector_centrality(g)
    assert ev.degenerate
    assert ev.values.sum() == pytest.approx(1.0, abs=1e-12)


def test_eigenvector_no_edges():
    with pytest.raises(DegenerateGraphError):
        M.eigenvector_centrality(freeze(MultiGraph(["a", "b"], [])))


# betweenness

def test_betweenness_path_and_star():
    assert M.betweenness(path(3)).node.tolist() == [0.0, 1.0, 0.0]
    assert M.betweenness(star(4)).node.tolist() == [0.0, 0.0, 0.0, 0.0, 6.0]


def test_edge_betweenness_path():
    # edges a-b, b-c, c-d each lie on the shortest paths of 3, 4, 3 pairs
    assert M.betweenness(path(4)).edge.tolist() == [3.0, 4.0, 3.0]


def test_betweenness_random_matches_enumeration():
    ids, edges = oracles.random_edges(random.Random(4), 25, 0.25)
    g = freeze(MultiGraph(ids, edges))
    node, edge = oracles.betweenness_oracle(ids, edges)
    bc = M.betweenness(g)
    got = by_id(g, bc.node)
    for v in ids:
        assert got[v] == pytest.approx(node[v], abs=1e-9)
    for e, value in zip(g.edge_list(), bc.edge.tolist()):
        assert value == pytest.approx(edge[frozenset(e)], abs=1e-9)


def test_betweenness_empty_graph():
    bc = M.betweenness(SimpleGraph.empty())
    assert bc.summary is None and len(bc.node) == 0


# closeness

def test_closeness_examples():
    assert M.closeness(complete(3)).values.tolist() == [0.5, 0.5, 0.5]
    assert M.closeness(path(3)).values.tolist() == [1 / 3, 1 / 2, 1 / 3]
    iso = freeze(MultiGraph(["a", "b", "c"], [("a", "b")]))
    assert M.closeness(iso).values.tolist() == [1.0, 1.0, 0.0]


def test_closeness_random_matches_bfs_oracle():
    ids, edges = oracles.random_connected_edges(random.Random(6), 100, 0.02)
    g = freeze(MultiGraph(ids, edges))
    expected = oracles.closeness_oracle(ids, edges)
    got = by_id(g, M.closeness(g).values)
    for v in ids:
        assert got[v] == pytest.approx(expected[v], abs=1e-12)


# overall

def test_overall_triangle():
    o = M.overall_metrics(complete(3))
    assert (o.vertices, o.unique_edges, o.density, o.connected_components, o.diameter, o.average_geodesic) == (
        3, 3, 1.0, 1, 1, 1.0,
    )
    assert o.graph_type == "Undirected" and o.self_loops == 0 and o.edges_with_duplicates == 0


def test_overall_two_edges():
    o = M.overall_metrics(graph_from_edges([("a", "b"), ("c", "d")]))
    assert o.connected_components == 2
    assert o.max_vertices_in_component == 2 and o.max_edges_in_component == 1
    assert o.diameter == 1 and o.single_vertex_components == 0


def test_overall_with_cleaning_stats():
    from friendgraph.cleaner import CleaningStats

    o = M.overall_metrics(complete(3), cleaning=CleaningStats(0, 2, 1))
    assert (o.unique_edges, o.edges_with_duplicates, o.self_loops, o.total_edges) == (3, 2, 1, 6)


def test_overall_isolated_and_empty():
    o = M.overall_metrics(freeze(MultiGraph(["a", "b", "c"], [("a", "b")])))
    assert o.single_vertex_components == 1 and o.connected_components == 2
    e = M.overall_metrics(SimpleGraph.empty())
    assert e.vertices == 0 and e.connected_components == 0 and e.density == 0.0


def test_overall_invariants_random():
    rng = random.Random(12)
    for _ in range(10):
        ids, edges = oracles.random_edges(rng, rng.randint(2, 60), rng.random() * 0.2)
        o = M.overall_metrics(freeze(MultiGraph(ids, edges)))
        assert o.connected_components >= 1
        assert o.max_vertices_in_component <= o.vertices
        assert 0.0 <= o.density <= 1.0
        if o.unique_edges:
            assert o.diameter >= o.average_geodesic


# cross-cutting properties

def _random_graph(seed, n=40, p=0.12):
    ids, edges = oracles.random_edges(random.Random(seed), n, p)
    return ids, edges, freeze(MultiGraph(ids, edges))


@pytest.mark.parametrize("seed", range(5))
def test_isomorphism_invariance(seed):
    ids, edges, g = _random_graph(seed)
    rng = random.Random(100 + seed)
    new_names = [f"r{i:03d}" for i in range(len(ids))]
    rng.shuffle(new_names)
    rename = dict(zip(ids, new_names))
    h = freeze(MultiGraph([rename[v] for v in ids], [(rename[a], rename[b]) for a, b in edges]))
    rg = M.analyze(g, threads=1)
    rh = M.analyze(h, threads=1)
    for name in M.METRIC_NAMES:
        a = by_id(g, rg.table[name])
        b = by_id(h, rh.table[name])
        for v in ids:
            assert a[v] == pytest.approx(b[rename[v]], rel=1e-9, abs=1e-12), name


def test_worker_count_independence():
    _, _, g = _random_graph(7, n=300, p=0.02)
    one = M.analyze(g, threads=1)
    four = M.analyze(g, threads=4)
    for name in M.METRIC_NAMES:
        assert np.array_equal(one.table[name], four.table[name]), name
    assert np.array_equal(one.edge_betweenness, four.edge_betweenness)
    assert one.overall == four.overall


def test_invariants_random_graphs():
    for seed in range(8):
        _, _, g = _random_graph(seed, n=60, p=0.06)
        r = M.analyze(g, threads=1)
        deg = r.table["degree"]
        assert deg.sum() == 2 * g.m
        assert r.table["pagerank"].sum() == pytest.approx(g.n, abs=1e-6 * g.n)
        assert np.all(r.table["pagerank"] > 0)
        c = r.table["clustering"]
        assert np.all((0 <= c) & (c <= 1))
        assert np.all(r.table["betweenness"][deg <= 1] == 0.0)
        assert np.all(r.table["betweenness"] >= 0)
        assert np.all(r.edge_betweenness >= 0)
        if g.m:
            assert r.table["eigenvector"].sum() == pytest.approx(1.0, abs=1e-8)
            assert np.all(r.table["eigenvector"] >= 0)


def test_analyze_edgeless_graph():
    r = M.analyze(freeze(MultiGraph(["a", "b"], [])))
    assert r.convergence["eigenvector"]["degenerate"]
    assert r.table["eigenvector"].tolist() == [0.0, 0.0]
    assert r.overall.connected_components == 2


def test_unknown_metric_column():
    r = M.analyze(complete(3))
    with pytest.raises(GraphInputError):
        r.table["weight"]
