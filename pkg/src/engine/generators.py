"""
Seeded generators for the six model-network families:
G(n,p), Watts-Strogatz, random regular, erased configuration model,
preferential attachment and the {3,7} hyperbolic triangular grid.

All randomness comes from numpy's PCG64 generator seeded with GenSpec.seed and
consumed in a fixed call order, so a (family, params, seed) triple always
yields the same edge set.
"""

import itertools
import logging
import os
import sys
from typing import Any, Dict, List, Literal, Optional, Sequence, Set, Tuple

import numpy as np
from pydantic import BaseModel, Field

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import (CONFIGURATION_PARAMS, GNP_PARAMS, HYPERBOLIC_GRID_DEGREE,
                    HYPERBOLIC_GRID_PARAMS, PREFERENTIAL_ATTACHMENT_PARAMS,
                    RANDOM_REGULAR_PARAMS, WATTS_STROGATZ_PARAMS)
from engine.graph_core import Graph, edge_id

logger = logging.getLogger(__name__)

Family = Literal["gnp", "watts_strogatz", "random_regular", "configuration",
                 "preferential_attachment", "hyperbolic_grid"]
FAMILIES = ("gnp", "watts_strogatz", "random_regular", "configuration",
            "preferential_attachment", "hyperbolic_grid")

# Restarts of the random-regular pairing before giving up
_MAX_REGULAR_ATTEMPTS = 1000


class GeneratorError(ValueError):
    """Raised for parameters outside a family's valid range."""


class GenSpec(BaseModel):
    family: Family
    params: Dict[str, Any] = Field(default_factory=dict)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def gnp(n: int, p: float, seed: int = 0) -> Graph:
    """
    Erdos-Renyi G(n, p): every unordered pair independently with probability p.
    Pairs are drawn in lexicographic (i, j), i < j order.
    """
    if n < 1:
        raise GeneratorError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise GeneratorError(f"p must be in [0,1], got {p}")
    rows, cols = np.triu_indices(n, k=1)
    keep = _rng(seed).random(len(rows)) < p
    return Graph.from_edges(n, zip(rows[keep].tolist(), cols[keep].tolist()))


def watts_strogatz(n: int, k: int, beta: float, seed: int = 0) -> Graph:
    """
    Ring of n nodes, each joined to its k nearest neighbors, then each node's
    k/2 clockwise edges have their far endpoint rewired with probability beta.
    Rewires that would create a loop or a duplicate are redrawn, so the edge
    count stays n*k/2.
    """
    if k % 2:
        raise GeneratorError(f"k must be even, got {k}")
    if not 0 <= k < n:
        raise GeneratorError(f"need 0 <= k < n, got k={k}, n={n}")
    if not 0.0 <= beta <= 1.0:
        raise GeneratorError(f"beta must be in [0,1], got {beta}")

    adjacency: List[Set[int]] = [set() for _ in range(n)]
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            adjacency[u].add(v)
            adjacency[v].add(u)

    rng = _rng(seed)
    for u in range(n):
        for j in range(1, k // 2 + 1):
            if rng.random() >= beta:
                continue
            if len(adjacency[u]) >= n - 1:
                continue
            v = (u + j) % n
            if v not in adjacency[u]:
                continue
            w = int(rng.integers(n))
            while w == u or w in adjacency[u]:
                w = int(rng.integers(n))
            adjacency[u].discard(v)
            adjacency[v].discard(u)
            adjacency[u].add(w)
            adjacency[w].add(u)

    pairs = [(u, v) for u in range(n) for v in adjacency[u] if u < v]
    return Graph.from_edges(n, pairs)


def _has_free_pair(edges: Set[Tuple[int, int]], pending: Dict[int, int]) -> bool:
    if not pending:
        return True
    for s1, s2 in itertools.combinations(pending, 2):
        if edge_id(s1, s2) not in edges:
            return True
    return False


def _try_regular(n: int, d: int, rng: np.random.Generator) -> Optional[Set[Tuple[int, int]]]:
    edges: Set[Tuple[int, int]] = set()
    stubs = np.repeat(np.arange(n), d)
    while len(stubs):
        pending: Dict[int, int] = {}
        shuffled = rng.permutation(stubs).tolist()
        for s1, s2 in zip(shuffled[::2], shuffled[1::2]):
            key = edge_id(s1, s2)
            if s1 != s2 and key not in edges:
                edges.add(key)
            else:
                pending[s1] = pending.get(s1, 0) + 1
                pending[s2] = pending.get(s2, 0) + 1
        if not _has_free_pair(edges, pending):
            return None
        stubs = np.repeat(np.fromiter(pending.keys(), dtype=np.int64),
                          np.fromiter(pending.values(), dtype=np.int64))
    return edges


def random_regular(n: int, d: int, seed: int = 0) -> Graph:
    """
    Random d-regular graph by stub pairing.

    Stubs that would form a loop or a repeated edge are re-paired among
    themselves; when no valid pair remains the whole pairing restarts.
    """
    if not 3 <= d < n:
        raise GeneratorError(f"need 3 <= d < n, got d={d}, n={n}")
    if (n * d) % 2:
        raise GeneratorError(f"n*d must be even, got n={n}, d={d}")

    rng = _rng(seed)
    for attempt in range(_MAX_REGULAR_ATTEMPTS):
        edges = _try_regular(n, d, rng)
        if edges is not None:
            if attempt:
                logger.debug("random_regular(%d, %d) needed %d restarts", n, d, attempt)
            return Graph.from_edges(n, edges)
    raise GeneratorError(f"could not pair stubs for random_regular({n}, {d})")


def configuration(degree_seq: Sequence[int], seed: int = 0) -> Graph:
    """
    Erased configuration model: shuffle all stubs, pair consecutive ones, then
    delete self-loops and repeated edges. Degrees never exceed the request.
    """
    degrees = [int(k) for k in degree_seq]
    if any(k < 0 for k in degrees):
        raise GeneratorError("degrees must be non-negative")
    if sum(degrees) % 2:
        raise GeneratorError("degree sequence sum must be even")

    n = len(degrees)
    stubs = np.repeat(np.arange(n), degrees)
    shuffled = _rng(seed).permutation(stubs).tolist()
    pairs = set()
    erased = 0
    for u, v in zip(shuffled[::2], shuffled[1::2]):
        key = edge_id(u, v)
        if u == v or key in pairs:
            erased += 1
            continue
        pairs.add(key)
    logger.debug("configuration model erased %d of %d stub pairs", erased, len(shuffled) // 2)
    return Graph.from_edges(n, pairs)


def preferential_attachment(n: int, k: int, seed: int = 0) -> Graph:
    """
    Barabasi-Albert growth from k isolated nodes. Each newcomer attaches to k
    distinct existing nodes chosen proportionally to degree (uniformly while
    every existing degree is 0). Exactly (n - k) * k edges.
    """
    if k < 1:
        raise GeneratorError(f"k must be >= 1, got {k}")
    if n <= k:
        raise GeneratorError(f"need n > k, got n={n}, k={k}")

    rng = _rng(seed)
    pairs: List[Tuple[int, int]] = []
    # Node ids repeated once per incident edge end
    repeated: List[int] = []
    for v in range(k, n):
        targets: List[int] = []
        while len(targets) < k:
            if repeated:
                t = repeated[int(rng.integers(len(repeated)))]
            else:
                t = int(rng.integers(v))
            if t not in targets:
                targets.append(t)
        for t in targets:
            pairs.append((t, v))
            repeated.extend((t, v))
    return Graph.from_edges(n, pairs)


def hyperbolic_grid(rings: int, max_nodes: Optional[int] = None) -> Graph:
    """
    Finite piece of the order-7 triangular tiling {3,7}.

    A center with 7 neighbors forms ring 1. Each further ring caps every
    boundary edge with a new apex vertex and fills the gap around each
    boundary vertex with a fan of new vertices, so that every vertex of the
    previous boundary ends with degree 7 and every bounded face is a triangle.
    Deterministic.

    Args:
        rings: Number of rings around the center (>= 1)
        max_nodes: Optional cut to the first max_nodes vertices in construction order

    Returns:
        Graph with node 0 at the center and ids increasing ring by ring
    """
    if rings < 1:
        raise GeneratorError(f"rings must be >= 1, got {rings}")
    q = HYPERBOLIC_GRID_DEGREE
    adjacency: List[Set[int]] = [set()]

    def add_node() -> int:
        adjacency.append(set())
        return len(adjacency) - 1

    def link(u: int, v: int) -> None:
        adjacency[u].add(v)
        adjacency[v].add(u)

    boundary = [add_node() for _ in range(q)]
    for i, v in enumerate(boundary):
        link(0, v)
        link(v, boundary[(i + 1) % q])

    for _ in range(rings - 1):
        private: List[List[int]] = []
        apex: List[int] = []
        next_boundary: List[int] = []
        for v in boundary:
            # fan around v spans q - deg(v) new neighbors, two of them apexes
            extra = q - len(adjacency[v]) - 2
            if extra < 0:
                raise GeneratorError(f"boundary vertex {v} already has degree {len(adjacency[v])}")
            fan = [add_node() for _ in range(extra)]
            cap = add_node()
            private.append(fan)
            apex.append(cap)
            next_boundary.extend(fan)
            next_boundary.append(cap)
        for i, v in enumerate(boundary):
            fan = [apex[i - 1]] + private[i] + [apex[i]]
            for w in fan:
                link(v, w)
            for a, b in zip(fan, fan[1:]):
                link(a, b)
        boundary = next_boundary

    n = len(adjacency)
    if max_nodes is not None and max_nodes < n:
        n = max(1, max_nodes)
    pairs = [(u, v) for u in range(n) for v in adjacency[u] if u < v < n]
    return Graph.from_edges(n, pairs)


def powerlaw_degree_sequence(n: int, gamma: float, k_min: int, k_max: int, seed: int = 0) -> List[int]:
    """
    n degrees drawn from P(k) proportional to k^-gamma on [k_min, k_max],
    with one degree bumped when needed so the sum is even.
    """
    if not 1 <= k_min <= k_max:
        raise GeneratorError(f"need 1 <= k_min <= k_max, got {k_min}, {k_max}")
    if n < 1:
        raise GeneratorError("n must be >= 1")
    support = np.arange(k_min, k_max + 1)
    weights = support.astype(np.float64) ** -float(gamma)
    degrees = _rng(seed).choice(support, size=n, p=weights / weights.sum()).tolist()
    if sum(degrees) % 2:
        idx = int(np.argmin(degrees))
        degrees[idx] += 1
    return [int(k) for k in degrees]


def _int(params: Dict[str, Any], key: str) -> int:
    if key not in params:
        raise GeneratorError(f"missing parameter '{key}'")
    try:
        return int(params[key])
    except (TypeError, ValueError):
        raise GeneratorError(f"parameter '{key}' must be an integer, got {params[key]!r}")


def _float(params: Dict[str, Any], key: str) -> float:
    if key not in params:
        raise GeneratorError(f"missing parameter '{key}'")
    try:
        return float(params[key])
    except (TypeError, ValueError):
        raise GeneratorError(f"parameter '{key}' must be a number, got {params[key]!r}")


def generate(spec: GenSpec, degree_seq: Optional[Sequence[int]] = None) -> Graph:
    """
    Build the graph a GenSpec describes.

    Args:
        spec: Family, parameters and seed
        degree_seq: Explicit degree sequence for the configuration family; when
            absent the family draws a power-law stand-in from n/gamma/k_min/k_max

    Returns:
        Generated graph
    """
    p, seed = spec.params, spec.seed
    if spec.family == "gnp":
        return gnp(_int(p, "n"), _float(p, "p"), seed)
    if spec.family == "watts_strogatz":
        return watts_strogatz(_int(p, "n"), _int(p, "k"), _float(p, "beta"), seed)
    if spec.family == "random_regular":
        return random_regular(_int(p, "n"), _int(p, "d"), seed)
    if spec.family == "configuration":
        if degree_seq is None:
            degree_seq = powerlaw_degree_sequence(
                _int(p, "n"), _float(p, "gamma"), _int(p, "k_min"), _int(p, "k_max"), seed)
        return configuration(degree_seq, seed)
    if spec.family == "preferential_attachment":
        return preferential_attachment(_int(p, "n"), _int(p, "k"), seed)
    if spec.family == "hyperbolic_grid":
        max_nodes = _int(p, "max_nodes") if "max_nodes" in p else None
        return hyperbolic_grid(_int(p, "rings"), max_nodes)
    raise GeneratorError(f"unknown family {spec.family!r}")


def model_battery(seed: int = 0, degree_seq: Optional[Sequence[int]] = None) -> Dict[str, Graph]:
    """The six model networks at their default battery sizes."""
    specs = {
        "gnp": GNP_PARAMS,
        "watts_strogatz": WATTS_STROGATZ_PARAMS,
        "random_regular": RANDOM_REGULAR_PARAMS,
        "configuration": CONFIGURATION_PARAMS,
        "preferential_attachment": PREFERENTIAL_ATTACHMENT_PARAMS,
        "hyperbolic_grid": HYPERBOLIC_GRID_PARAMS,
    }
    graphs = {}
    for family, params in specs.items():
        spec = GenSpec(family=family, params=dict(params), seed=seed)
        graphs[family] = generate(spec, degree_seq if family == "configuration" else None)
    return graphs
