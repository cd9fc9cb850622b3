"""
Core graph representation for Ricci Topology.
Immutable undirected simple graphs with dense integer node ids, plus the
shortest-path, component and summary primitives every other module builds on.
"""

import hashlib
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cs_components
from scipy.sparse.csgraph import shortest_path

logger = logging.getLogger(__name__)

EdgeId = Tuple[int, int]

# Rows of the all-pairs distance matrix computed per scipy call
_APSP_CHUNK = 256


class GraphError(ValueError):
    """Raised for malformed graph input or out-of-range node ids."""


def edge_id(u: int, v: int) -> EdgeId:
    """Canonical orientation of an undirected edge."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """
    Undirected simple graph over nodes 0..n-1.

    edges are canonical (u < v) and sorted; adjacency holds sorted neighbor
    tuples. labels maps node id -> original string id when the graph came
    from an edge list.
    """
    n: int
    edges: Tuple[EdgeId, ...]
    adjacency: Tuple[Tuple[int, ...], ...]
    labels: Optional[Tuple[str, ...]] = None
    edge_attrs: Optional[Dict[EdgeId, str]] = field(default=None, compare=False)

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[Tuple[int, int]],
                   labels: Optional[Sequence[str]] = None,
                   edge_attrs: Optional[Dict[EdgeId, str]] = None) -> "Graph":
        """
        Build a graph from integer pairs, collapsing duplicates.

        Args:
            n: Node count
            pairs: Iterable of (u, v) pairs with endpoints in [0, n)
            labels: Optional string id per node
            edge_attrs: Optional per-edge attribute keyed by canonical EdgeId

        Returns:
            Graph instance
        """
        if n < 0:
            raise GraphError("node count must be non-negative")
        if labels is not None and len(labels) != n:
            raise GraphError(f"expected {n} labels, got {len(labels)}")

        edge_set = set()
        for u, v in pairs:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            edge_set.add(edge_id(u, v))

        neighbors: List[List[int]] = [[] for _ in range(n)]
        for u, v in edge_set:
            neighbors[u].append(v)
            neighbors[v].append(u)

        return cls(
            n=n,
            edges=tuple(sorted(edge_set)),
            adjacency=tuple(tuple(sorted(nbrs)) for nbrs in neighbors),
            labels=tuple(labels) if labels is not None else None,
            edge_attrs=dict(edge_attrs) if edge_attrs else None,
        )

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> FrozenSet[EdgeId]:
        return frozenset(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return edge_id(u, v) in self.edge_set

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def degree_sequence(self) -> List[int]:
        return [len(nbrs) for nbrs in self.adjacency]

    def relabeled(self, permutation: Sequence[int]) -> "Graph":
        """
        Isomorphic copy where node v becomes permutation[v].

        Args:
            permutation: A permutation of range(n)

        Returns:
            Relabeled graph (string labels follow their nodes)
        """
        if sorted(permutation) != list(range(self.n)):
            raise GraphError("relabeling must be a permutation of the node ids")
        labels = None
        if self.labels is not None:
            moved = [""] * self.n
            for v, target in enumerate(permutation):
                moved[target] = self.labels[v]
            labels = moved
        attrs = None
        if self.edge_attrs:
            attrs = {edge_id(permutation[u], permutation[v]): value
                     for (u, v), value in self.edge_attrs.items()}
        pairs = [(permutation[u], permutation[v]) for u, v in self.edges]
        return Graph.from_edges(self.n, pairs, labels=labels, edge_attrs=attrs)

    def fingerprint(self) -> str:
        """Order-independent sha256 of the sorted label-pair edge list."""
        rows = sorted(tuple(sorted((self.label(u), self.label(v)))) for u, v in self.edges)
        digest = hashlib.sha256()
        for a, b in rows:
            digest.update(f"{a}\t{b}\n".encode("utf-8"))
        return digest.hexdigest()

    def to_csr(self) -> csr_matrix:
        """Symmetric 0/1 adjacency matrix."""
        if not self.edges:
            return csr_matrix((self.n, self.n), dtype=np.int8)
        arr = np.asarray(self.edges, dtype=np.int64)
        rows = np.concatenate([arr[:, 0], arr[:, 1]])
        cols = np.concatenate([arr[:, 1], arr[:, 0]])
        data = np.ones(len(rows), dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))


@dataclass(frozen=True)
class BuildReport:
    """Outcome of building a graph from raw string pairs."""
    graph: Graph
    loops_dropped: int
    duplicates_dropped: int


@dataclass(frozen=True)
class GraphStats:
    node_count: int
    edge_count: int
    max_degree: int
    avg_degree: float
    diameter: int
    mean_shortest_path_length: float


def build_graph(raw_edges: Sequence[Sequence[str]]) -> BuildReport:
    """
    Build a graph from string id pairs.

    Ids are mapped to [0, n) in first-appearance order. Self-loops and repeated
    pairs are dropped and counted. An optional third element per pair is kept
    as the edge attribute (first occurrence wins).

    Args:
        raw_edges: Sequence of (u, v) or (u, v, attr) string tuples

    Returns:
        BuildReport with the graph and the drop counts
    """
    if not raw_edges:
        raise GraphError("no edges")

    index: Dict[str, int] = {}
    labels: List[str] = []
    pairs: List[EdgeId] = []
    seen = set()
    attrs: Dict[EdgeId, str] = {}
    loops = dups = 0

    for raw in raw_edges:
        a, b = str(raw[0]), str(raw[1])
        for token in (a, b):
            if token not in index:
                index[token] = len(labels)
                labels.append(token)
        if a == b:
            loops += 1
            continue
        key = edge_id(index[a], index[b])
        if key in seen:
            dups += 1
            continue
        seen.add(key)
        pairs.append(key)
        if len(raw) > 2 and raw[2] is not None:
            attrs[key] = str(raw[2])

    if not pairs:
        raise GraphError("no edges")

    graph = Graph.from_edges(len(labels), pairs, labels=labels, edge_attrs=attrs or None)
    if loops or dups:
        logger.info("dropped %d self-loops and %d duplicate edges", loops, dups)
    return BuildReport(graph=graph, loops_dropped=loops, duplicates_dropped=dups)


def bfs_distances(g: Graph, source: int, max_depth: Optional[int] = None) -> Dict[int, int]:
    """
    Unweighted hop distances from source.

    Args:
        g: Graph
        source: Start node
        max_depth: Optional hop bound; nodes farther away are omitted

    Returns:
        Dictionary node -> hop distance for every reached node
    """
    if not 0 <= source < g.n:
        raise GraphError(f"source {source} out of range [0, {g.n})")

    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        d = dist[v]
        if max_depth is not None and d >= max_depth:
            continue
        for w in g.adjacency[v]:
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


def connected_components(g: Graph) -> Tuple[int, List[int]]:
    """
    Label connected components.

    Returns:
        Tuple of (component count, label per node id with labels 0..count-1)
    """
    if g.n == 0:
        return 0, []
    count, labels = _cs_components(g.to_csr(), directed=False)
    return int(count), [int(x) for x in labels]


def largest_component_size(g: Graph) -> int:
    if g.n == 0:
        return 0
    _, labels = connected_components(g)
    return int(np.bincount(labels).max())


def largest_component_nodes(g: Graph) -> List[int]:
    """Node ids of the largest component (smallest label wins ties)."""
    if g.n == 0:
        return []
    _, labels = connected_components(g)
    sizes = np.bincount(labels)
    target = int(np.argmax(sizes))
    return [v for v, lab in enumerate(labels) if lab == target]


def all_pairs_hops(g: Graph, nodes: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    Dense hop-distance matrix restricted to nodes (all nodes by default).
    Unreachable pairs are np.inf.
    """
    nodes = list(range(g.n)) if nodes is None else list(nodes)
    adj = g.to_csr()
    if len(nodes) != g.n:
        adj = adj[nodes][:, nodes]
    size = len(nodes)
    out = np.empty((size, size), dtype=np.float64)
    for start in range(0, size, _APSP_CHUNK):
        rows = list(range(start, min(size, start + _APSP_CHUNK)))
        out[start:start + len(rows)] = shortest_path(adj, directed=False, unweighted=True, indices=rows)
    return out


def graph_stats(g: Graph) -> GraphStats:
    """
    Size and distance summary. Diameter and mean shortest path length are taken
    over the largest connected component (unordered pairs).
    """
    if g.n < 1:
        raise GraphError("graph_stats needs at least one node")

    degrees = g.degree_sequence()
    component = largest_component_nodes(g)
    diameter = 0
    mean_path = 0.0
    if len(component) > 1:
        dist = all_pairs_hops(g, component)
        upper = dist[np.triu_indices(len(component), k=1)]
        diameter = int(upper.max())
        mean_path = float(upper.sum() / len(upper))

    return GraphStats(
        node_count=g.n,
        edge_count=g.edge_count,
        max_degree=max(degrees),
        avg_degree=2.0 * g.edge_count / g.n,
        diameter=diameter,
        mean_shortest_path_length=mean_path,
    )
