"""
Ollivier-Ricci curvature of edges and nodes.

For an edge (x, y) with hop distance 1, kappa(x, y) = 1 - W(m_x, m_y) where
m_x keeps mass alpha at x and spreads (1 - alpha) / deg(x) over the
neighbors of x. Edges are independent, so whole-graph runs fan out over a
process pool and are gathered back into canonical edge order.
"""

import logging
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing import Pool
from typing import Dict, Optional, Tuple, Union

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import DEFAULT_ALPHA, SUPPORT_BFS_DEPTH, ZERO_BAND
from engine.graph_core import EdgeId, Graph, bfs_distances, edge_id
from engine.transport import DistanceLookup, MassDistribution, wasserstein

logger = logging.getLogger(__name__)

AlphaLike = Union[Fraction, int, float, str]


class CurvatureError(ValueError):
    """Raised for invalid alpha, isolated nodes or edges absent from the graph."""


def parse_alpha(value: AlphaLike) -> Fraction:
    """
    Convert user input to an exact alpha in [0, 1].
    Floats go through their shortest decimal repr so 0.5 becomes 1/2.
    """
    try:
        if isinstance(value, float):
            alpha = Fraction(repr(value))
        else:
            alpha = Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError):
        raise CurvatureError(f"alpha must be a number, got {value!r}")
    if not 0 <= alpha <= 1:
        raise CurvatureError("alpha must be in [0,1]")
    return alpha


@dataclass
class CurvatureMap:
    """
    Per-edge curvature for one alpha, keyed by canonical EdgeId in sorted order.
    """
    graph: Graph
    alpha: Fraction
    edge_values: Dict[EdgeId, Fraction]
    _node_cache: Optional[Dict[int, Fraction]] = field(default=None, repr=False, compare=False)

    def __getitem__(self, e: EdgeId) -> Fraction:
        return self.edge_values[edge_id(*e)]

    def __len__(self) -> int:
        return len(self.edge_values)

    def as_floats(self) -> Dict[EdgeId, float]:
        return {e: float(k) for e, k in self.edge_values.items()}

    def node_values(self) -> Dict[int, Fraction]:
        """Mean incident edge curvature for every node of degree >= 1."""
        if self._node_cache is None:
            totals: Dict[int, Fraction] = {}
            for (u, v), kappa in self.edge_values.items():
                totals[u] = totals.get(u, Fraction(0)) + kappa
                totals[v] = totals.get(v, Fraction(0)) + kappa
            self._node_cache = {
                v: totals[v] / self.graph.degree(v) for v in sorted(totals)
            }
        return self._node_cache


@dataclass(frozen=True)
class SignSummary:
    negative: int
    zero: int
    positive: int

    @property
    def total(self) -> int:
        return self.negative + self.zero + self.positive

    def fractions(self) -> Tuple[float, float, float]:
        if self.total == 0:
            return 0.0, 0.0, 0.0
        return self.negative / self.total, self.zero / self.total, self.positive / self.total


def alpha_measure(g: Graph, x: int, alpha: AlphaLike = DEFAULT_ALPHA) -> MassDistribution:
    """
    The alpha-lazy measure at x.

    Args:
        g: Graph
        x: Node id
        alpha: Mass kept at x

    Returns:
        MassDistribution with alpha at x and (1 - alpha) / deg(x) on each neighbor
    """
    alpha = parse_alpha(alpha)
    k = g.degree(x)
    if k == 0:
        raise CurvatureError(f"isolated node has no measure (node {x})")
    share = (1 - alpha) / k
    weights = {w: share for w in g.neighbors(x)}
    weights[x] = alpha
    return MassDistribution.from_dict(weights)


def edge_transport_inputs(g: Graph, e: EdgeId,
                          alpha: AlphaLike = DEFAULT_ALPHA) -> Tuple[MassDistribution, MassDistribution, DistanceLookup]:
    """
    The two measures of an edge and the full-graph hop distances between
    their supports (depth-bounded BFS from every support node of m_x).
    """
    x, y = edge_id(*e)
    if not g.has_edge(x, y):
        raise CurvatureError(f"edge ({x}, {y}) is not in the graph")
    mu = alpha_measure(g, x, alpha)
    nu = alpha_measure(g, y, alpha)
    rows = {s: bfs_distances(g, s, max_depth=SUPPORT_BFS_DEPTH) for s in mu.support}

    def lookup(a: int, b: int) -> Optional[int]:
        return rows[a].get(b)

    return mu, nu, lookup


def edge_curvature(g: Graph, e: EdgeId, alpha: AlphaLike = DEFAULT_ALPHA) -> Fraction:
    """
    kappa(x, y) = 1 - W(m_x, m_y) for an edge (x, y).

    Returns:
        Exact curvature as a Fraction
    """
    mu, nu, lookup = edge_transport_inputs(g, e, alpha)
    w, _ = wasserstein(mu, nu, lookup)
    return 1 - w


# ---Shared state for pool workers.---
_worker_graph: Optional[Graph] = None
_worker_alpha: Fraction = DEFAULT_ALPHA


def _init_worker(g: Graph, alpha: Fraction) -> None:
    global _worker_graph, _worker_alpha
    _worker_graph = g
    _worker_alpha = alpha


def _curvature_task(e: EdgeId) -> Tuple[EdgeId, Fraction]:
    return e, edge_curvature(_worker_graph, e, _worker_alpha)


def all_edge_curvatures(g: Graph, alpha: AlphaLike = DEFAULT_ALPHA, workers: int = 1,
                        chunksize: Optional[int] = None) -> CurvatureMap:
    """
    Curvature of every edge.

    Args:
        g: Graph
        alpha: Lazy-walk parameter
        workers: Process count; 1 runs inline
        chunksize: Edges per pool task (auto when None)

    Returns:
        CurvatureMap in canonical edge order; identical for any worker count
    """
    alpha = parse_alpha(alpha)
    if workers < 1:
        raise CurvatureError("workers must be >= 1")

    t0 = time.perf_counter()
    if workers == 1 or g.edge_count < 2:
        results = [(e, edge_curvature(g, e, alpha)) for e in g.edges]
    else:
        if chunksize is None:
            chunksize, extra = divmod(g.edge_count, workers * 4)
            chunksize += 1 if extra else 0
            chunksize = max(1, chunksize)
        with Pool(processes=workers, initializer=_init_worker, initargs=(g, alpha)) as pool:
            results = pool.map(_curvature_task, g.edges, chunksize=chunksize)

    values = dict(results)
    ordered = {e: values[e] for e in g.edges}
    logger.info("%.3f s for %d edge curvatures (alpha=%s, workers=%d)",
                time.perf_counter() - t0, len(ordered), alpha, workers)
    return CurvatureMap(graph=g, alpha=alpha, edge_values=ordered)


def node_curvature(cmap: CurvatureMap, g: Graph, v: int) -> float:
    """Arithmetic mean of the curvatures of the edges incident to v."""
    if g.degree(v) == 0:
        raise CurvatureError(f"node {v} is isolated; node curvature undefined")
    total = sum((cmap[(v, w)] for w in g.neighbors(v)), Fraction(0))
    return float(total / g.degree(v))


def curvature_sign_summary(cmap: CurvatureMap, zero_band: float = ZERO_BAND) -> SignSummary:
    """Count negatively, zero and positively curved edges."""
    neg = zero = pos = 0
    for kappa in cmap.edge_values.values():
        value = float(kappa)
        if abs(value) < zero_band:
            zero += 1
        elif value < 0:
            neg += 1
        else:
            pos += 1
    return SignSummary(negative=neg, zero=zero, positive=pos)
