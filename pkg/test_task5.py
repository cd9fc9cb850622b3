#!/usr/bin/env python3
"""
Test script for Task 5 milestone: Model network generators
"""

import os
import sys

import pytest
from pydantic import ValidationError

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), 'src'))

from config import CONFIGURATION_PARAMS
from engine.generators import (GeneratorError, GenSpec, configuration, generate,
                               gnp, hyperbolic_grid, model_battery,
                               powerlaw_degree_sequence, preferential_attachment,
                               random_regular, watts_strogatz)
from engine.graph_core import connected_components

# (nodes, edges) of the {3,7} grid per ring count
GRID_GOLDENS = {1: (8, 14), 2: (29, 63), 3: (85, 196), 4: (232, 546), 5: (617, 1463)}


def test_gnp_edge_count_and_determinism():
    g = gnp(1000, 0.01, seed=42)
    assert 4700 <= g.edge_count <= 5300
    assert gnp(1000, 0.01, seed=42).edges == g.edges
    assert gnp(100, 0.1, seed=1).edges != gnp(100, 0.1, seed=2).edges
    assert gnp(10, 0.0).edge_count == 0
    assert gnp(10, 1.0).edge_count == 45


def test_gnp_validation():
    with pytest.raises(GeneratorError):
        gnp(10, 1.5)
    with pytest.raises(GeneratorError):
        gnp(0, 0.5)


def test_watts_strogatz_counts():
    g = watts_strogatz(1000, 8, 0.5, seed=42)
    assert g.edge_count == 4000
    assert min(g.degree_sequence()) >= 4

    ring = watts_strogatz(20, 4, 0.0)
    assert set(ring.degree_sequence()) == {4}
    assert ring.edge_count == 40


def test_watts_strogatz_validation():
    with pytest.raises(GeneratorError, match="even"):
        watts_strogatz(10, 3, 0.1)
    with pytest.raises(GeneratorError):
        watts_strogatz(10, 10, 0.1)
    with pytest.raises(GeneratorError):
        watts_strogatz(10, 4, -0.1)


def test_random_regular():
    g = random_regular(1000, 8, seed=42)
    assert g.edge_count == 4000
    assert set(g.degree_sequence()) == {8}
    assert random_regular(1000, 8, seed=42).edges == g.edges

    small = random_regular(10, 3, seed=5)
    assert set(small.degree_sequence()) == {3}


def test_random_regular_validation():
    with pytest.raises(GeneratorError, match="even"):
        random_regular(9, 3)
    with pytest.raises(GeneratorError):
        random_regular(5, 2)
    with pytest.raises(GeneratorError):
        random_regular(4, 4)


def test_preferential_attachment():
    g = preferential_attachment(1000, 2, seed=42)
    assert g.edge_count == 1996
    assert g.n == 1000
    assert connected_components(g)[0] == 1
    assert max(g.degree_sequence()) > 20
    assert preferential_attachment(1000, 2, seed=42).edges == g.edges

    with pytest.raises(GeneratorError):
        preferential_attachment(2, 2)


def test_configuration_model():
    degrees = [3] * 10 + [1] * 4
    g = configuration(degrees, seed=3)
    assert g.n == 14
    assert all(got <= want for got, want in zip(g.degree_sequence(), degrees))
    assert g.edge_count <= sum(degrees) // 2
    assert configuration(degrees, seed=3).edges == g.edges

    with pytest.raises(GeneratorError, match="even"):
        configuration([1, 1, 1])
    with pytest.raises(GeneratorError):
        configuration([2, -2])


def test_powerlaw_degree_sequence():
    degrees = powerlaw_degree_sequence(895, 2.3, 2, 70, seed=42)
    assert len(degrees) == 895
    assert sum(degrees) % 2 == 0
    assert min(degrees) >= 2 and max(degrees) <= 71
    assert degrees == powerlaw_degree_sequence(895, 2.3, 2, 70, seed=42)
    with pytest.raises(GeneratorError):
        powerlaw_degree_sequence(10, 2.3, 5, 2)


def test_configuration_stand_in_size():
    spec = GenSpec(family="configuration", params=dict(CONFIGURATION_PARAMS), seed=42)
    g = generate(spec)
    assert g.n == 895
    assert 1600 <= g.edge_count <= 2400


def test_hyperbolic_grid_goldens():
    for rings, (nodes, edges) in GRID_GOLDENS.items():
        g = hyperbolic_grid(rings)
        assert (g.n, g.edge_count) == (nodes, edges)


def test_hyperbolic_grid_wheel():
    g = hyperbolic_grid(1)
    assert g.degree(0) == 7
    assert all(g.degree(v) == 3 for v in range(1, 8))


def test_hyperbolic_grid_interior_degree():
    for rings in range(2, 6):
        g = hyperbolic_grid(rings)
        interior = GRID_GOLDENS[rings - 1][0]
        assert all(g.degree(v) == 7 for v in range(interior))
        assert max(g.degree_sequence()) == 7
        assert connected_components(g)[0] == 1


def test_hyperbolic_grid_is_triangulated():
    # every edge of the finite piece lies on at least one triangle
    g = hyperbolic_grid(3)
    for u, v in g.edges:
        assert set(g.neighbors(u)) & set(g.neighbors(v))


def test_hyperbolic_grid_truncation():
    g = hyperbolic_grid(6, max_nodes=848)
    assert g.n == 848
    assert connected_components(g)[0] == 1
    assert hyperbolic_grid(2, max_nodes=1000).n == 29
    with pytest.raises(GeneratorError):
        hyperbolic_grid(0)


def test_generate_dispatch():
    g = generate(GenSpec(family="gnp", params={"n": "50", "p": "0.2"}, seed=7))
    assert g.edges == gnp(50, 0.2, seed=7).edges

    grid = generate(GenSpec(family="hyperbolic_grid", params={"rings": 2}))
    assert grid.n == 29

    explicit = generate(GenSpec(family="configuration", params={}, seed=1), degree_seq=[2, 2, 2, 2])
    assert explicit.n == 4


def test_generate_errors():
    with pytest.raises(GeneratorError, match="missing parameter 'p'"):
        generate(GenSpec(family="gnp", params={"n": 10}))
    with pytest.raises(GeneratorError, match="integer"):
        generate(GenSpec(family="gnp", params={"n": "ten", "p": 0.1}))
    with pytest.raises(ValidationError):
        GenSpec(family="lattice", params={})
    with pytest.raises(ValidationError):
        GenSpec(family="gnp", params={}, seed=-1)


@pytest.mark.slow
def test_model_battery():
    graphs = model_battery(seed=42)
    assert set(graphs) == {"gnp", "watts_strogatz", "random_regular", "configuration",
                           "preferential_attachment", "hyperbolic_grid"}
    assert graphs["watts_strogatz"].edge_count == 4000
    assert graphs["preferential_attachment"].edge_count == 1996
    assert graphs["random_regular"].edge_count == 4000
    assert graphs["hyperbolic_grid"].n == 848


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
