"""
Experiment battery over curvature maps:
1. Curvature histograms and alpha sweeps
2. Connectivity sweeps (adding edges by curvature order)
3. Robustness sweeps (targeted vs random edge removal)
4. Correlation of curvature with centrality/clustering metrics
5. Geographic edge length vs curvature
6. Per-edge transport solver timing
"""

import logging
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.cluster.hierarchy import DisjointSet

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import (BENCH_REPEATS, DEFAULT_SEED, EARTH_RADIUS_KM,
                    HISTOGRAM_BIN_WIDTH, KAPPA_MAX, KAPPA_MIN)
from engine.graph_core import EdgeId, Graph, GraphStats
from engine.metrics import MetricError, MetricVector, pearson_r
from engine.ricci import (AlphaLike, CurvatureMap, all_edge_curvatures,
                          edge_transport_inputs, parse_alpha)
from engine.transport import wasserstein

logger = logging.getLogger(__name__)

DIRECTIONS = ("increasing", "decreasing")
STRATEGIES = ("most_negative_first", "random")
TRANSFORMS = ("identity", "log10")


class ExperimentError(ValueError):
    """Raised when an experiment has no usable input."""


@dataclass
class ExperimentSeries:
    """
    (x, y) samples behind one plot. Sweeps are ordered (xs strictly
    increasing); scatter series keep canonical edge/node order instead.
    extra holds additional columns written between x and y.
    """
    kind: str
    x_label: str
    y_label: str
    xs: List[float]
    ys: List[float]
    meta: Dict[str, Any] = field(default_factory=dict)
    extra: Dict[str, List[float]] = field(default_factory=dict)
    ordered: bool = True

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise ExperimentError("xs and ys differ in length")
        for name, column in self.extra.items():
            if len(column) != len(self.xs):
                raise ExperimentError(f"column {name} differs in length")
        if self.ordered and any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ExperimentError("xs must be strictly increasing")

    def __len__(self) -> int:
        return len(self.xs)


@dataclass
class Histogram:
    bin_edges: List[float]
    counts: List[int]
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.counts) != len(self.bin_edges) - 1:
            raise ExperimentError("need exactly one more bin edge than counts")

    @property
    def total(self) -> int:
        return int(sum(self.counts))

    def bin_index(self, value: float) -> int:
        """Index of the bin a value falls into (last bin closed)."""
        for i in range(len(self.counts)):
            lo, hi = self.bin_edges[i], self.bin_edges[i + 1]
            if lo <= value < hi or (i == len(self.counts) - 1 and value == hi):
                return i
        raise ExperimentError(f"{value} outside histogram range")


class NodeGeo(BaseModel):
    label: str = ""
    lat: float = Field(ge=-90.0, le=90.0)
    lon: float = Field(ge=-180.0, le=180.0)


class Correlation(NamedTuple):
    points: ExperimentSeries
    r: float
    excluded: int


def _meta(cmap: CurvatureMap, **extra) -> Dict[str, Any]:
    meta = {"alpha": str(cmap.alpha), "fingerprint": cmap.graph.fingerprint()}
    meta.update(extra)
    return meta


def _exact_width(bin_width) -> Fraction:
    width = Fraction(repr(bin_width)) if isinstance(bin_width, float) else Fraction(bin_width)
    if width <= 0:
        raise ExperimentError("bin_width must be positive")
    return width


def curvature_histogram(cmap: CurvatureMap, bin_width=HISTOGRAM_BIN_WIDTH) -> Histogram:
    """
    Fixed-width bins covering [-2, 1]. A value on a boundary goes to the right
    bin except in the last bin, which is closed. Binning is exact.

    Args:
        cmap: Curvature map
        bin_width: Bin width

    Returns:
        Histogram over all edge curvatures
    """
    if len(cmap) == 0:
        raise ExperimentError("empty curvature map")
    width = _exact_width(bin_width)
    nbins = math.ceil((KAPPA_MAX - KAPPA_MIN) / width)
    idx = [min(nbins - 1, math.floor((k - KAPPA_MIN) / width)) for k in cmap.edge_values.values()]
    counts = np.bincount(np.asarray(idx, dtype=np.int64), minlength=nbins)
    edges = [float(KAPPA_MIN + i * width) for i in range(nbins + 1)]
    return Histogram(bin_edges=edges, counts=[int(c) for c in counts],
                     meta=_meta(cmap, bin_width=str(width)))


def alpha_sweep(g: Graph, alphas: Sequence[AlphaLike], bin_width=HISTOGRAM_BIN_WIDTH,
                workers: int = 1) -> List[Tuple[Fraction, Histogram]]:
    """One histogram per alpha, sharing the same bins."""
    if not alphas:
        raise ExperimentError("alphas must be non-empty")
    out = []
    for alpha in alphas:
        alpha = parse_alpha(alpha)
        cmap = all_edge_curvatures(g, alpha, workers=workers)
        out.append((alpha, curvature_histogram(cmap, bin_width)))
    return out


def _curvature_order(cmap: CurvatureMap, ascending: bool) -> List[EdgeId]:
    # ties always fall back to canonical edge order
    if ascending:
        return sorted(cmap.edge_values, key=lambda e: (cmap.edge_values[e], e))
    return sorted(cmap.edge_values, key=lambda e: (-cmap.edge_values[e], e))


def connectivity_sweep(g: Graph, cmap: CurvatureMap, direction: str = "increasing") -> ExperimentSeries:
    """
    Start from n isolated nodes and add edges by curvature, recording the
    number of connected components after each addition.

    Args:
        g: Graph
        cmap: Curvature map covering g
        direction: 'increasing' or 'decreasing' curvature

    Returns:
        Series of (edges added, components), starting at (0, n)
    """
    if direction not in DIRECTIONS:
        raise ExperimentError(f"direction must be one of {DIRECTIONS}")
    order = _curvature_order(cmap, ascending=(direction == "increasing"))
    m = len(order)

    components = DisjointSet(range(g.n))
    count = g.n
    xs, ys, fractions = [0.0], [float(count)], [0.0]
    for i, (u, v) in enumerate(order, start=1):
        if components.merge(u, v):
            count -= 1
        xs.append(float(i))
        ys.append(float(count))
        fractions.append(i / m)

    return ExperimentSeries(kind="connectivity", x_label="edges_added", y_label="components",
                            xs=xs, ys=ys, extra={"fraction_added": fractions},
                            meta=_meta(cmap, direction=direction))


def _removal_sizes(g: Graph, order: Sequence[EdgeId]) -> List[int]:
    """
    Largest component size after removing the first k edges of order, for
    k = 0..m, computed by adding the edges back in reverse.
    """
    m = len(order)
    sizes = [0] * (m + 1)
    components = DisjointSet(range(g.n))
    largest = 1 if g.n else 0
    sizes[m] = largest
    for k in range(m - 1, -1, -1):
        u, v = order[k]
        components.merge(u, v)
        largest = max(largest, components.subset_size(u))
        sizes[k] = largest
    return sizes


def _removal_series(g: Graph, cmap: CurvatureMap, order: Sequence[EdgeId], strategy: str,
                    seed: Optional[int]) -> ExperimentSeries:
    m = len(order)
    sizes = _removal_sizes(g, order)
    if m == 0:
        xs, removed, ys = [1.0], [0.0], [float(sizes[0])]
    else:
        xs = [k / m for k in range(m + 1)]
        removed = [float(k) for k in range(m + 1)]
        ys = [float(s) for s in sizes]
    return ExperimentSeries(kind="robustness", x_label="fraction_removed", y_label="largest_component",
                            xs=xs, ys=ys, extra={"edges_removed": removed},
                            meta=_meta(cmap, strategy=strategy, seed=seed))


def robustness_sweep(g: Graph, cmap: CurvatureMap, strategy: str = "most_negative_first",
                     seed: int = DEFAULT_SEED) -> ExperimentSeries:
    """
    Remove edges one at a time and record the largest component size.

    Args:
        g: Graph
        cmap: Curvature map covering g
        strategy: 'most_negative_first' (ascending curvature) or 'random'
        seed: Seed for the random strategy

    Returns:
        Series of (fraction removed, largest component) from 0 to 1
    """
    if strategy == "most_negative_first":
        return _removal_series(g, cmap, _curvature_order(cmap, ascending=True), strategy, None)
    if strategy == "random":
        return random_robustness_trials(g, cmap, seed, trials=1)[0][0]
    raise ExperimentError(f"strategy must be one of {STRATEGIES}")


def random_robustness_trials(g: Graph, cmap: CurvatureMap, seed: int = DEFAULT_SEED,
                             trials: int = 1) -> Tuple[List[ExperimentSeries], ExperimentSeries]:
    """
    Repeated uniform random removal orders from one seeded generator.

    Returns:
        Tuple of (per-trial series, pointwise mean series)
    """
    if trials < 1:
        raise ExperimentError("trials must be >= 1")
    edges = list(cmap.edge_values)
    rng = np.random.Generator(np.random.PCG64(seed))
    runs = []
    for t in range(trials):
        perm = rng.permutation(len(edges))
        series = _removal_series(g, cmap, [edges[i] for i in perm], "random", seed)
        series.meta["trial"] = t
        runs.append(series)

    mean_ys = np.mean(np.array([s.ys for s in runs]), axis=0).tolist()
    mean = ExperimentSeries(kind="robustness", x_label="fraction_removed", y_label="largest_component",
                            xs=list(runs[0].xs), ys=mean_ys, extra=dict(runs[0].extra),
                            meta=_meta(cmap, strategy="random", seed=seed, trials=trials))
    return runs, mean


def size_at_fraction(series: ExperimentSeries, fraction: float) -> float:
    """y value of a robustness series once at least `fraction` of edges are gone."""
    for x, y in zip(series.xs, series.ys):
        if x >= fraction:
            return y
    return series.ys[-1]


def correlate(cmap: CurvatureMap, metric: MetricVector, y_transform: str = "identity") -> Correlation:
    """
    Pair curvature with a metric and compute Pearson's r.

    Edge metrics pair with edge curvature, node metrics with node curvature.
    Under log10, non-positive metric values are dropped and counted.

    Returns:
        Correlation(points, r, excluded)
    """
    if y_transform not in TRANSFORMS:
        raise ExperimentError(f"y_transform must be one of {TRANSFORMS}")

    if metric.on_edges:
        source = cmap.edge_values
    else:
        source = cmap.node_values()

    xs, ys = [], []
    excluded = 0
    for key, kappa in source.items():
        if key not in metric.values:
            continue
        y = float(metric.values[key])
        if y_transform == "log10":
            if y <= 0:
                excluded += 1
                continue
            y = math.log10(y)
        xs.append(float(kappa))
        ys.append(y)

    if len(xs) < 2:
        raise ExperimentError("need at least 2 valid (curvature, metric) pairs")
    if excluded:
        logger.info("log10 transform dropped %d non-positive %s values", excluded, metric.kind)

    r = pearson_r(xs, ys)
    y_label = metric.kind if y_transform == "identity" else f"log10_{metric.kind}"
    series = ExperimentSeries(kind=f"correlate_{metric.kind}", x_label="kappa", y_label=y_label,
                              xs=xs, ys=ys, ordered=False,
                              meta=_meta(cmap, metric=metric.kind, transform=y_transform,
                                         r=r, excluded=excluded))
    return Correlation(points=series, r=r, excluded=excluded)


def geo_distance(a: NodeGeo, b: NodeGeo) -> float:
    """Great-circle (haversine) distance in kilometers."""
    lat1, lon1, lat2, lon2 = np.radians([a.lat, a.lon, b.lat, b.lon])
    h = np.sin((lat2 - lat1) / 2) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin((lon2 - lon1) / 2) ** 2
    return float(2 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0))))


def geo_curvature_scatter(g: Graph, cmap: CurvatureMap,
                          coords: Dict[int, NodeGeo]) -> Tuple[ExperimentSeries, int]:
    """
    One (kappa, km) point per edge whose endpoints both have coordinates.

    Returns:
        Tuple of (scatter series, number of skipped edges)
    """
    xs, ys = [], []
    skipped = 0
    for (u, v), kappa in cmap.edge_values.items():
        if u in coords and v in coords:
            xs.append(float(kappa))
            ys.append(geo_distance(coords[u], coords[v]))
        else:
            skipped += 1
    if not xs:
        raise ExperimentError("no edge has coordinates for both endpoints")
    if skipped:
        logger.info("geo scatter skipped %d edges without coordinates", skipped)
    series = ExperimentSeries(kind="geo", x_label="kappa", y_label="distance_km",
                              xs=xs, ys=ys, ordered=False, meta=_meta(cmap, skipped=skipped))
    return series, skipped


def solver_benchmark(g: Graph, alpha: AlphaLike = Fraction(1, 2),
                     repeats: int = BENCH_REPEATS) -> Tuple[ExperimentSeries, float]:
    """
    Time the transport solve of every edge against k_x * k_y.
    Each edge keeps the fastest of `repeats` solves; distance lookups are
    prepared outside the timed region.

    Returns:
        Tuple of (scatter of (k_x*k_y, seconds), Pearson r); r is nan when
        every edge has the same k_x*k_y
    """
    if repeats < 1:
        raise ExperimentError("repeats must be >= 1")
    alpha = parse_alpha(alpha)
    xs, ys = [], []
    for e in g.edges:
        mu, nu, lookup = edge_transport_inputs(g, e, alpha)
        best = math.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            wasserstein(mu, nu, lookup)
            best = min(best, time.perf_counter() - t0)
        xs.append(float(g.degree(e[0]) * g.degree(e[1])))
        ys.append(best)
    try:
        r = pearson_r(xs, ys)
    except MetricError as exc:
        logger.warning("solver timing correlation undefined: %s", exc)
        r = math.nan
    series = ExperimentSeries(kind="bench", x_label="kx_ky", y_label="seconds", xs=xs, ys=ys,
                              ordered=False,
                              meta={"alpha": str(alpha), "fingerprint": g.fingerprint(),
                                    "repeats": repeats, "r": "" if math.isnan(r) else r})
    return series, r


def table_row(name: str, stats: GraphStats) -> Dict[str, Any]:
    """One row of the graph summary table."""
    return {
        "name": name,
        "nodes": stats.node_count,
        "edges": stats.edge_count,
        "max_degree": stats.max_degree,
        "avg_degree": round(stats.avg_degree, 2),
        "diameter": stats.diameter,
        "mean_shortest_path_length": round(stats.mean_shortest_path_length, 2),
    }
