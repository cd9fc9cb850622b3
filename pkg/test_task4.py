#!/usr/bin/env python3
"""
Test script for Task 4 milestone: Graph metrics & hyperbolicity
"""

import itertools
import os
import sys
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), 'src'))

from engine.graph_core import Graph, bfs_distances, graph_stats
from engine.metrics import (MetricError, MetricVector, clustering_coefficient,
                            clustering_vector, degree_vector, edge_betweenness,
                            farness, hyperbolicity_ratio, metric_vector,
                            pearson_r, slim_triangle_delta)


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_tree(rng, n):
    return Graph.from_edges(n, [(v, int(rng.integers(v))) for v in range(1, n)])


def random_graph(rng, n, p):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(n, pairs)


def random_connected(rng, n, extra):
    pairs = [(v, int(rng.integers(v))) for v in range(1, n)]
    for _ in range(extra):
        u, v = rng.integers(n, size=2)
        if u != v:
            pairs.append((int(u), int(v)))
    return Graph.from_edges(n, pairs)


def all_shortest_paths(g, s, t, dist_t):
    """Every shortest s-t path as a node list, walking down the distance to t."""
    if s == t:
        return [[s]]
    paths = []
    for w in g.neighbors(s):
        if dist_t.get(w) == dist_t[s] - 1:
            paths.extend([s] + rest for rest in all_shortest_paths(g, w, t, dist_t))
    return paths


def brute_betweenness(g):
    totals = {e: Fraction(0) for e in g.edges}
    for s, t in itertools.combinations(range(g.n), 2):
        dist_t = bfs_distances(g, t)
        if s not in dist_t:
            continue
        paths = all_shortest_paths(g, s, t, dist_t)
        for path in paths:
            for a, b in zip(path, path[1:]):
                totals[(min(a, b), max(a, b))] += Fraction(1, len(paths))
    return totals


def geodesics(g):
    """Node sets of every geodesic between every ordered pair."""
    out = {}
    for s in range(g.n):
        for t in range(g.n):
            dist_t = bfs_distances(g, t)
            out[(s, t)] = [set(p) for p in all_shortest_paths(g, s, t, dist_t)]
    return out


def brute_delta(g):
    rows = [bfs_distances(g, v) for v in range(g.n)]
    paths = geodesics(g)
    delta = 0
    for a, b, c in itertools.product(range(g.n), repeat=3):
        for side in paths[(a, b)]:
            for one in paths[(b, c)]:
                for two in paths[(c, a)]:
                    others = one | two
                    for p in side:
                        delta = max(delta, min(rows[p][q] for q in others))
    return delta


def test_betweenness_small_examples():
    assert edge_betweenness(path_graph(3)).values == {(0, 1): 2.0, (1, 2): 2.0}
    assert set(edge_betweenness(complete_graph(3)).values.values()) == {1.0}
    assert set(edge_betweenness(cycle_graph(4)).values.values()) == {2.0}
    assert edge_betweenness(path_graph(5), exact=True).values == {
        (0, 1): 4, (1, 2): 6, (2, 3): 6, (3, 4): 4}


def test_betweenness_matches_path_enumeration():
    rng = np.random.Generator(np.random.PCG64(100))
    for _ in range(50):
        g = random_graph(rng, int(rng.integers(2, 31)), float(rng.uniform(0.05, 0.3)))
        assert edge_betweenness(g, exact=True).values == brute_betweenness(g)


def test_betweenness_matches_networkx():
    rng = np.random.Generator(np.random.PCG64(101))
    for _ in range(10):
        g = random_graph(rng, 40, 0.1)
        ref = nx.Graph()
        ref.add_nodes_from(range(g.n))
        ref.add_edges_from(g.edges)
        expected = nx.edge_betweenness_centrality(ref, normalized=False)
        ours = edge_betweenness(g).values
        for (u, v), value in expected.items():
            assert ours[(min(u, v), max(u, v))] == pytest.approx(value)


def test_farness():
    values = farness(path_graph(3)).values
    assert values == {0: pytest.approx(1.5), 1: pytest.approx(1.0), 2: pytest.approx(1.5)}
    assert all(v == pytest.approx(1.5) for v in farness(cycle_graph(5)).values.values())

    # isolated nodes have no farness
    assert 2 not in farness(Graph.from_edges(3, [(0, 1)])).values


def test_farness_matches_bfs():
    rng = np.random.Generator(np.random.PCG64(102))
    for _ in range(20):
        g = random_graph(rng, int(rng.integers(2, 31)), 0.15)
        values = farness(g).values
        for v in range(g.n):
            dist = bfs_distances(g, v)
            if len(dist) < 2:
                assert v not in values
                continue
            assert values[v] == pytest.approx(sum(dist.values()) / (len(dist) - 1))


def test_clustering_coefficient():
    k4_minus = Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    assert clustering_coefficient(k4_minus, 2) == pytest.approx(2 / 3)
    assert clustering_coefficient(complete_graph(5), 0) == pytest.approx(1.0)
    assert clustering_coefficient(cycle_graph(5), 0) == 0.0
    with pytest.raises(MetricError, match="clustering undefined"):
        clustering_coefficient(path_graph(3), 0)

    assert set(clustering_vector(path_graph(4)).values) == {1, 2}


def test_clustering_matches_networkx():
    rng = np.random.Generator(np.random.PCG64(103))
    g = random_graph(rng, 30, 0.25)
    ref = nx.Graph()
    ref.add_nodes_from(range(g.n))
    ref.add_edges_from(g.edges)
    expected = nx.clustering(ref)
    for v, value in clustering_vector(g).values.items():
        assert value == pytest.approx(expected[v])


def test_diameter_matches_bfs():
    rng = np.random.Generator(np.random.PCG64(104))
    for _ in range(20):
        g = random_connected(rng, int(rng.integers(2, 31)), 10)
        expected = max(max(bfs_distances(g, v).values()) for v in range(g.n))
        assert graph_stats(g).diameter == expected


def test_metric_vector_dispatch():
    g = path_graph(4)
    assert metric_vector(g, "betweenness").on_edges
    assert metric_vector(g, "edge_betweenness").kind == "edge_betweenness"
    assert not metric_vector(g, "farness").on_edges
    assert degree_vector(g).values == {0: 1.0, 1: 2.0, 2: 2.0, 3: 1.0}
    with pytest.raises(MetricError):
        metric_vector(g, "pagerank")
    with pytest.raises(MetricError):
        MetricVector(kind="pagerank", values={})


def test_delta_examples():
    assert slim_triangle_delta(cycle_graph(4)) == 1
    assert slim_triangle_delta(complete_graph(5)) == 0
    assert slim_triangle_delta(path_graph(6)) == 0
    assert slim_triangle_delta(Graph.from_edges(1, [])) == 0


def test_delta_of_trees_is_zero():
    rng = np.random.Generator(np.random.PCG64(105))
    for _ in range(20):
        assert slim_triangle_delta(random_tree(rng, int(rng.integers(2, 41)))) == 0


def test_delta_cycle_eight_matches_enumeration():
    c8 = cycle_graph(8)
    assert brute_delta(c8) == 2
    assert slim_triangle_delta(c8) == brute_delta(c8)


def test_delta_matches_enumeration_on_small_graphs():
    rng = np.random.Generator(np.random.PCG64(106))
    for _ in range(5):
        g = random_connected(rng, int(rng.integers(4, 9)), 3)
        assert slim_triangle_delta(g) == brute_delta(g)


def test_sampled_delta_is_a_lower_bound():
    c8 = cycle_graph(8)
    sampled = slim_triangle_delta(c8, mode="sampled", samples=300, seed=1)
    assert 0 <= sampled <= 2
    assert sampled == slim_triangle_delta(c8, mode="sampled", samples=300, seed=1)


def test_delta_errors():
    with pytest.raises(MetricError, match="connected"):
        slim_triangle_delta(Graph.from_edges(4, [(0, 1), (2, 3)]))
    with pytest.raises(MetricError, match="sampled"):
        slim_triangle_delta(path_graph(5), cap=3)
    with pytest.raises(MetricError):
        slim_triangle_delta(path_graph(5), mode="fourpoint")


def test_hyperbolicity_ratio():
    assert hyperbolicity_ratio(1, 2) == 0.5
    assert hyperbolicity_ratio(0, 0) == 0.0


def test_pearson_r():
    assert pearson_r([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)
    assert pearson_r([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    with pytest.raises(MetricError, match="zero variance"):
        pearson_r([1, 1, 1], [1, 2, 3])
    with pytest.raises(MetricError):
        pearson_r([1, 2], [1, 2, 3])
    with pytest.raises(MetricError):
        pearson_r([1], [1])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
