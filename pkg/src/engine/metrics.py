"""
Graph metrics compared against curvature:
1. Edge betweenness: shortest-path shares through each edge
2. Farness: mean hop distance to the rest of the component
3. Degree and clustering coefficient
4. Slim-triangle hyperbolicity (delta)
5. Pearson correlation
"""

import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import HYPERBOLICITY_EXACT_CAP, HYPERBOLICITY_SAMPLES, DEFAULT_SEED
from engine.graph_core import (EdgeId, Graph, all_pairs_hops, bfs_distances,
                               connected_components, edge_id)

logger = logging.getLogger(__name__)

METRIC_KINDS = ("edge_betweenness", "farness", "degree", "clustering")
EDGE_KINDS = ("edge_betweenness",)


class MetricError(ValueError):
    """Raised when a metric is undefined for its input."""


@dataclass(frozen=True)
class MetricVector:
    """Metric values keyed by EdgeId (edge kinds) or node id (node kinds)."""
    kind: str
    values: Dict[Union[EdgeId, int], Union[float, Fraction]]

    def __post_init__(self):
        if self.kind not in METRIC_KINDS:
            raise MetricError(f"unknown metric kind {self.kind!r}")

    @property
    def on_edges(self) -> bool:
        return self.kind in EDGE_KINDS


def _shortest_path_dag(g: Graph, source: int) -> Tuple[List[int], List[int], List[List[int]]]:
    """BFS order, shortest-path counts and predecessor lists from source."""
    dist = [-1] * g.n
    sigma = [0] * g.n
    preds: List[List[int]] = [[] for _ in range(g.n)]
    dist[source] = 0
    sigma[source] = 1
    order = [source]
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        for w in g.adjacency[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                order.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, sigma, preds


def edge_betweenness(g: Graph, exact: bool = False) -> MetricVector:
    """
    B(e) = sum over unordered pairs {i, j} of sigma_ij(e) / sigma_ij.

    One BFS plus dependency back-propagation per source; the ordered-pair
    totals are halved. The pair {i, j} also counts toward the edge (i, j).

    Args:
        g: Graph
        exact: Accumulate Fractions instead of floats

    Returns:
        MetricVector of kind edge_betweenness
    """
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    totals = {e: zero for e in g.edges}

    for s in range(g.n):
        order, sigma, preds = _shortest_path_dag(g, s)
        delta = [zero] * g.n
        for w in reversed(order):
            coeff = (one + delta[w]) / sigma[w]
            for v in preds[w]:
                share = sigma[v] * coeff
                totals[edge_id(v, w)] += share
                delta[v] += share

    return MetricVector(kind="edge_betweenness", values={e: b / 2 for e, b in totals.items()})


def farness(g: Graph) -> MetricVector:
    """Mean hop distance from each node to the other nodes of its component."""
    count, labels = connected_components(g)
    members: Dict[int, List[int]] = {}
    for v, lab in enumerate(labels):
        members.setdefault(lab, []).append(v)

    values: Dict[int, float] = {}
    for nodes in members.values():
        if len(nodes) < 2:
            continue
        dist = all_pairs_hops(g, nodes)
        means = dist.sum(axis=1) / (len(nodes) - 1)
        for v, mean in zip(nodes, means):
            values[v] = float(mean)
    return MetricVector(kind="farness", values=dict(sorted(values.items())))


def clustering_coefficient(g: Graph, v: int) -> float:
    """
    Triangles at v divided by C(deg(v), 2).

    Raises:
        MetricError: degree below 2
    """
    nbrs = g.neighbors(v)
    k = len(nbrs)
    if k < 2:
        raise MetricError(f"clustering undefined for node {v} (degree {k})")
    triangles = sum(1 for i in range(k) for j in range(i + 1, k) if g.has_edge(nbrs[i], nbrs[j]))
    return triangles / (k * (k - 1) / 2)


def degree_vector(g: Graph) -> MetricVector:
    return MetricVector(kind="degree", values={v: float(g.degree(v)) for v in range(g.n)})


def clustering_vector(g: Graph) -> MetricVector:
    """Clustering coefficient of every node with degree >= 2."""
    values = {v: clustering_coefficient(g, v) for v in range(g.n) if g.degree(v) >= 2}
    return MetricVector(kind="clustering", values=values)


def metric_vector(g: Graph, kind: str) -> MetricVector:
    """Dispatch by metric name (CLI spelling 'betweenness' accepted)."""
    if kind in ("betweenness", "edge_betweenness"):
        return edge_betweenness(g)
    if kind == "farness":
        return farness(g)
    if kind == "degree":
        return degree_vector(g)
    if kind == "clustering":
        return clustering_vector(g)
    raise MetricError(f"unknown metric {kind!r}")


# --- Slim triangles ---

RowLookup = Callable[[int], np.ndarray]


def _geodesic_profile(g: Graph, row: RowLookup, x: int, y: int, points: np.ndarray) -> np.ndarray:
    """
    For every p in points: the largest value, over geodesics from x to y,
    of the distance from p to the nearest vertex of that geodesic.

    Bottleneck DP over the layers of the x-y interval.
    """
    dx, dy = row(x), row(y)
    length = int(dx[y])
    best = {x: row(x)[points].astype(np.int32)}
    frontier = [x]
    for _ in range(length):
        nxt: Dict[int, np.ndarray] = {}
        for u in frontier:
            du = int(dx[u])
            for w in g.adjacency[u]:
                if dx[w] != du + 1 or dx[w] + dy[w] != length:
                    continue
                if w in nxt:
                    nxt[w] = np.maximum(nxt[w], best[u])
                else:
                    nxt[w] = best[u].copy()
        for w, incoming in nxt.items():
            best[w] = np.minimum(incoming, row(w)[points])
        frontier = list(nxt)
    return best[y]


def _interval(row: RowLookup, a: int, b: int) -> np.ndarray:
    da, db = row(a), row(b)
    return np.flatnonzero(da + db == da[b])


def _require_connected(g: Graph) -> None:
    count, _ = connected_components(g)
    if count != 1:
        raise MetricError("slim_triangle_delta needs a connected graph")


def _exact_delta(g: Graph) -> int:
    dist = all_pairs_hops(g).astype(np.int32)
    n = g.n
    everyone = np.arange(n)

    def row(v: int) -> np.ndarray:
        return dist[v]

    profile = np.empty((n, n, n), dtype=np.int16)
    for x in range(n):
        profile[x, x] = dist[x]
        for y in range(x + 1, n):
            values = _geodesic_profile(g, row, x, y, everyone)
            profile[x, y] = values
            profile[y, x] = values

    delta = 0
    for a in range(n):
        for b in range(a, n):
            on_side = _interval(row, a, b)
            # p on side [a, b]; the other sides are [b, c] and [c, a] for every c
            worst = np.minimum(profile[b][:, on_side], profile[a][:, on_side])
            delta = max(delta, int(worst.max()))
    return delta


def _sampled_delta(g: Graph, samples: int, seed: int) -> int:
    rows: Dict[int, np.ndarray] = {}

    def row(v: int) -> np.ndarray:
        if v not in rows:
            hops = bfs_distances(g, v)
            arr = np.empty(g.n, dtype=np.int32)
            for w, d in hops.items():
                arr[w] = d
            rows[v] = arr
        return rows[v]

    rng = np.random.Generator(np.random.PCG64(seed))
    triples = rng.integers(0, g.n, size=(samples, 3))
    delta = 0
    for a, b, c in triples.tolist():
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            on_side = _interval(row, x, y)
            far_one = _geodesic_profile(g, row, y, z, on_side)
            far_two = _geodesic_profile(g, row, z, x, on_side)
            delta = max(delta, int(np.minimum(far_one, far_two).max()))
    return delta


def slim_triangle_delta(g: Graph, mode: str = "exact", samples: int = HYPERBOLICITY_SAMPLES,
                        seed: int = DEFAULT_SEED, cap: int = HYPERBOLICITY_EXACT_CAP) -> int:
    """
    Slim-triangle delta over vertex geodesics.

    The maximum, over vertex triples and every choice of geodesic sides, of the
    distance from a vertex on one side to the nearest vertex of the other two.

    Args:
        g: Connected graph
        mode: 'exact' (all triples, n <= cap) or 'sampled' (lower bound)
        samples: Triples drawn in sampled mode
        seed: Seed for sampled mode
        cap: Largest n accepted by exact mode

    Returns:
        delta in hops
    """
    _require_connected(g)
    if mode == "exact":
        if g.n > cap:
            raise MetricError(f"exact mode is limited to {cap} nodes (graph has {g.n}); use sampled mode")
        return _exact_delta(g)
    if mode == "sampled":
        if samples < 1:
            raise MetricError("samples must be >= 1")
        return _sampled_delta(g, samples, seed)
    raise MetricError(f"unknown hyperbolicity mode {mode!r}")


def hyperbolicity_ratio(delta: int, diameter: int) -> float:
    """delta relative to the diameter (reported only)."""
    return delta / diameter if diameter > 0 else 0.0


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    """
    Sample Pearson correlation.

    Raises:
        MetricError: length mismatch, fewer than 2 points or zero variance
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape:
        raise MetricError("sequences differ in length")
    if len(x) < 2:
        raise MetricError("need at least 2 points")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise MetricError("zero variance")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    r = float(np.dot(dx, dy)) / np.sqrt(sxx * syy)
    return float(np.clip(r, -1.0, 1.0))
