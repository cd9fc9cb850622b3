#!/usr/bin/env python3
"""
Test script for Task 2 milestone: Exact transport solver
"""

import os
import sys
from fractions import Fraction

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), 'src'))

from engine.graph_core import Graph, bfs_distances
from engine.transport import (MassDistribution, TransportError, oracle_wasserstein,
                              to_row_fractions, wasserstein)


def path_hops(a, b):
    return abs(a - b)


def measure(weights):
    return MassDistribution.from_dict({k: Fraction(v) for k, v in weights.items()})


def random_metric(rng, n):
    """Hop distances of a random connected graph on n nodes."""
    pairs = [(v, int(rng.integers(v))) for v in range(1, n)]
    for _ in range(int(rng.integers(0, n))):
        u, v = rng.integers(n, size=2)
        if u != v:
            pairs.append((int(u), int(v)))
    g = Graph.from_edges(n, pairs)
    rows = [bfs_distances(g, v) for v in range(n)]
    return lambda a, b: rows[a][b]


def random_measure(rng, n, q):
    """Random measure on at most 6 nodes whose masses all have denominator q."""
    k = int(rng.integers(1, min(6, n, q) + 1))
    support = rng.choice(n, size=k, replace=False).tolist()
    cuts = sorted(rng.choice(np.arange(1, q), size=k - 1, replace=False).tolist()) if k > 1 else []
    bounds = [0] + cuts + [q]
    return MassDistribution.from_dict({
        v: Fraction(bounds[i + 1] - bounds[i], q) for i, v in enumerate(support)
    })


def check_plan(mu, nu, w, plan, dist):
    assert plan.total_cost == w
    assert all(mass > 0 for _, _, mass in plan.entries)
    assert plan.row_sums() == mu.as_dict()
    assert plan.column_sums() == nu.as_dict()
    assert sum((dist(s, t) * m for s, t, m in plan.entries), Fraction(0)) == w


def test_mass_distribution_validation():
    with pytest.raises(TransportError, match="sum to 1"):
        MassDistribution.from_dict({0: Fraction(1, 2), 1: Fraction(1, 3)})
    with pytest.raises(TransportError):
        MassDistribution(support=(1, 0), masses=(Fraction(1, 2), Fraction(1, 2)))
    mu = MassDistribution.from_dict({2: Fraction(1), 5: Fraction(0)})
    assert mu.support == (2,)


def test_identical_measures_cost_nothing():
    mu = measure({0: Fraction(1, 3), 1: Fraction(2, 3)})
    w, plan = wasserstein(mu, mu, path_hops)
    assert w == 0
    check_plan(mu, mu, w, plan, path_hops)

    swapped = measure({1: Fraction(1, 2), 0: Fraction(1, 2)})
    same = measure({0: Fraction(1, 2), 1: Fraction(1, 2)})
    assert wasserstein(same, swapped, path_hops)[0] == 0


def test_single_atom_shift():
    w, plan = wasserstein(measure({0: 1}), measure({1: 1}), path_hops)
    assert w == 1
    assert plan.entries == ((0, 1, Fraction(1)),)


def test_half_half_on_path():
    mu = measure({0: Fraction(1, 2), 1: Fraction(1, 2)})
    nu = measure({1: Fraction(1, 2), 2: Fraction(1, 2)})
    w, plan = wasserstein(mu, nu, path_hops)
    assert w == 1
    assert oracle_wasserstein(mu, nu, path_hops) == 1
    check_plan(mu, nu, w, plan, path_hops)


def test_missing_distance_is_an_error():
    mu = measure({0: 1})
    nu = measure({1: 1})
    with pytest.raises(TransportError, match="ground distance undefined"):
        wasserstein(mu, nu, lambda a, b: None)
    with pytest.raises(TransportError, match="ground distance undefined"):
        wasserstein(mu, nu, lambda a, b: {}[(a, b)])
    with pytest.raises(TransportError, match="ground distance undefined"):
        wasserstein(mu, nu, lambda a, b: float("inf"))


def test_oracle_scale_limit():
    mu = measure({0: Fraction(1, 10007), 1: Fraction(10006, 10007)})
    with pytest.raises(TransportError, match="oracle scale exceeded"):
        oracle_wasserstein(mu, measure({1: 1}), path_hops)
    assert oracle_wasserstein(measure({3: 1}), measure({3: 1}), path_hops) == 0


def test_row_fraction_form_is_equivalent():
    rng = np.random.Generator(np.random.PCG64(21))
    for _ in range(50):
        n = int(rng.integers(2, 10))
        dist = random_metric(rng, n)
        q = int(rng.integers(1, 30))
        mu, nu = random_measure(rng, n, q), random_measure(rng, n, q)
        w, plan = wasserstein(mu, nu, dist)
        rho = to_row_fractions(plan, mu)
        weights = mu.as_dict()
        for src in mu.support:
            assert sum((r for (s, _), r in rho.items() if s == src), Fraction(0)) == 1
        cost = sum((dist(s, t) * r * weights[s] for (s, t), r in rho.items()), Fraction(0))
        assert cost == w


def test_symmetry_and_bounds():
    rng = np.random.Generator(np.random.PCG64(13))
    for _ in range(100):
        n = int(rng.integers(2, 12))
        dist = random_metric(rng, n)
        q = int(rng.integers(1, 40))
        mu, nu = random_measure(rng, n, q), random_measure(rng, n, q)
        w = wasserstein(mu, nu, dist)[0]
        assert w == wasserstein(nu, mu, dist)[0]
        pair_costs = [dist(a, b) for a in mu.support for b in nu.support]
        assert min(pair_costs) <= w <= max(pair_costs)


def test_triangle_inequality():
    rng = np.random.Generator(np.random.PCG64(17))
    for _ in range(100):
        n = int(rng.integers(2, 12))
        dist = random_metric(rng, n)
        q = int(rng.integers(1, 30))
        a, b, c = (random_measure(rng, n, q) for _ in range(3))
        ab = wasserstein(a, b, dist)[0]
        bc = wasserstein(b, c, dist)[0]
        ac = wasserstein(a, c, dist)[0]
        assert ac <= ab + bc


@pytest.mark.slow
def test_solver_matches_oracle_on_fuzzed_instances():
    rng = np.random.Generator(np.random.PCG64(2024))
    for _ in range(1000):
        n = int(rng.integers(2, 13))
        dist = random_metric(rng, n)
        q = int(rng.integers(1, 61))
        mu, nu = random_measure(rng, n, q), random_measure(rng, n, q)
        w, plan = wasserstein(mu, nu, dist)
        assert w == oracle_wasserstein(mu, nu, dist)
        check_plan(mu, nu, w, plan, dist)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
