"""
Exact Wasserstein (earth mover) distance between finite discrete measures.

Masses are exact rationals. They are scaled to a common integer denominator and
moved with successive-shortest-path min-cost flow on the complete bipartite
network between the two supports, so the optimum is exact with no tolerance.
"""

import heapq
import logging
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import ORACLE_MAX_SCALE

logger = logging.getLogger(__name__)

DistanceLookup = Callable[[int, int], Optional[int]]

_INF = float("inf")


class TransportError(ValueError):
    """Raised for invalid measures or an undefined ground distance."""


@dataclass(frozen=True)
class MassDistribution:
    """
    Probability measure over node ids with exact rational masses.

    support is sorted without duplicates, every mass is positive and the
    masses sum to exactly 1.
    """
    support: Tuple[int, ...]
    masses: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.support) != len(self.masses):
            raise TransportError("support and masses differ in length")
        if any(b <= a for a, b in zip(self.support, self.support[1:])):
            raise TransportError("support must be sorted without duplicates")
        if any(m <= 0 for m in self.masses):
            raise TransportError("masses must be positive")
        if sum(self.masses, Fraction(0)) != 1:
            raise TransportError("measure must sum to 1")

    @classmethod
    def from_dict(cls, weights: Dict[int, Fraction]) -> "MassDistribution":
        """Build from node -> mass, dropping zero entries."""
        items = sorted((int(v), Fraction(m)) for v, m in weights.items() if m != 0)
        return cls(support=tuple(v for v, _ in items), masses=tuple(m for _, m in items))

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(zip(self.support, self.masses))

    def common_denominator(self) -> int:
        return math.lcm(*(m.denominator for m in self.masses))


@dataclass(frozen=True)
class TransportPlan:
    entries: Tuple[Tuple[int, int, Fraction], ...]
    total_cost: Fraction

    def row_sums(self) -> Dict[int, Fraction]:
        sums: Dict[int, Fraction] = {}
        for src, _, mass in self.entries:
            sums[src] = sums.get(src, Fraction(0)) + mass
        return sums

    def column_sums(self) -> Dict[int, Fraction]:
        sums: Dict[int, Fraction] = {}
        for _, dst, mass in self.entries:
            sums[dst] = sums.get(dst, Fraction(0)) + mass
        return sums


class _MinCostFlow:
    """
    Successive shortest paths with Dijkstra on reduced costs.
    Arc 2k is forward, arc 2k+1 its residual twin.
    """

    def __init__(self, size: int):
        self.size = size
        self.out: List[List[int]] = [[] for _ in range(size)]
        self.head: List[int] = []
        self.cap: List[int] = []
        self.cost: List[int] = []

    def add_arc(self, u: int, v: int, cap: int, cost: int) -> int:
        idx = len(self.head)
        self.head += [v, u]
        self.cap += [cap, 0]
        self.cost += [cost, -cost]
        self.out[u].append(idx)
        self.out[v].append(idx + 1)
        return idx

    def flow(self, source: int, sink: int, amount: int) -> int:
        potential = [0] * self.size
        sent = 0
        total_cost = 0
        while sent < amount:
            dist = [_INF] * self.size
            via = [-1] * self.size
            dist[source] = 0
            heap = [(0, source)]
            while heap:
                d, u = heapq.heappop(heap)
                if d > dist[u]:
                    continue
                pu = potential[u]
                for a in self.out[u]:
                    if self.cap[a] <= 0:
                        continue
                    v = self.head[a]
                    nd = d + self.cost[a] + pu - potential[v]
                    if nd < dist[v]:
                        dist[v] = nd
                        via[v] = a
                        heapq.heappush(heap, (nd, v))
            if dist[sink] == _INF:
                raise TransportError("measures cannot be matched")
            for v in range(self.size):
                if dist[v] < _INF:
                    potential[v] += dist[v]

            push = amount - sent
            v = sink
            while v != source:
                a = via[v]
                push = min(push, self.cap[a])
                v = self.head[a ^ 1]
            v = sink
            while v != source:
                a = via[v]
                self.cap[a] -= push
                self.cap[a ^ 1] += push
                v = self.head[a ^ 1]
            sent += push
            total_cost += push * (potential[sink] - potential[source])
        return total_cost


def _cost_matrix(mu: MassDistribution, nu: MassDistribution, dist: DistanceLookup) -> List[List[int]]:
    rows = []
    for x in mu.support:
        row = []
        for y in nu.support:
            try:
                d = dist(x, y)
            except (KeyError, IndexError):
                d = None
            if d is None or d == _INF:
                raise TransportError(f"ground distance undefined for ({x}, {y})")
            if d < 0:
                raise TransportError(f"negative ground distance for ({x}, {y})")
            row.append(int(d))
        rows.append(row)
    return rows


def wasserstein(mu: MassDistribution, nu: MassDistribution,
                dist: DistanceLookup) -> Tuple[Fraction, TransportPlan]:
    """
    Exact earth mover distance and an optimal plan.

    Args:
        mu: Source measure
        nu: Target measure
        dist: Ground distance lookup (source-id, target-id) -> hops; None,
            KeyError or inf mean the distance is undefined

    Returns:
        Tuple of (W as Fraction, TransportPlan attaining W)
    """
    costs = _cost_matrix(mu, nu, dist)
    scale = math.lcm(mu.common_denominator(), nu.common_denominator())
    supply = [int(m * scale) for m in mu.masses]
    demand = [int(m * scale) for m in nu.masses]

    m, n = len(supply), len(demand)
    source, sink = 0, m + n + 1
    net = _MinCostFlow(m + n + 2)
    for i, units in enumerate(supply):
        net.add_arc(source, 1 + i, units, 0)
    for j, units in enumerate(demand):
        net.add_arc(1 + m + j, sink, units, 0)
    middle = {}
    for i in range(m):
        for j in range(n):
            middle[(i, j)] = net.add_arc(1 + i, 1 + m + j, scale, costs[i][j])

    total = net.flow(source, sink, scale)

    entries = []
    for (i, j), arc in middle.items():
        moved = net.cap[arc ^ 1]
        if moved > 0:
            entries.append((mu.support[i], nu.support[j], Fraction(moved, scale)))
    w = Fraction(total, scale)
    return w, TransportPlan(entries=tuple(entries), total_cost=w)


def to_row_fractions(plan: TransportPlan, mu: MassDistribution) -> Dict[Tuple[int, int], Fraction]:
    """
    Express a plan as row-stochastic fractions rho[i, j] = xi(i, j) / mu(i),
    the normalisation used by the fractional LP formulation.
    """
    weights = mu.as_dict()
    return {(src, dst): mass / weights[src] for src, dst, mass in plan.entries}


def oracle_wasserstein(mu: MassDistribution, nu: MassDistribution, dist: DistanceLookup) -> Fraction:
    """
    Independent reference solver.

    Both measures are expanded into D unit atoms (D = common denominator) and
    matched with a minimum-cost perfect assignment.
    """
    scale = math.lcm(mu.common_denominator(), nu.common_denominator())
    if scale > ORACLE_MAX_SCALE:
        raise TransportError("oracle scale exceeded")

    costs = np.array(_cost_matrix(mu, nu, dist), dtype=np.float64)
    left = [int(m * scale) for m in mu.masses]
    right = [int(m * scale) for m in nu.masses]
    expanded = np.repeat(np.repeat(costs, left, axis=0), right, axis=1)
    rows, cols = linear_sum_assignment(expanded)
    total = int(round(float(expanded[rows, cols].sum())))
    return Fraction(total, scale)


def test_transport():
    """Test function for the transport solver."""
    hops = {(0, 0): 0, (0, 1): 1, (0, 2): 2, (1, 1): 0, (1, 2): 1, (2, 2): 0}

    def lookup(a: int, b: int) -> int:
        return hops[(min(a, b), max(a, b))]

    mu = MassDistribution.from_dict({0: Fraction(1, 2), 1: Fraction(1, 2)})
    nu = MassDistribution.from_dict({1: Fraction(1, 2), 2: Fraction(1, 2)})
    w, plan = wasserstein(mu, nu, lookup)
    print(f"W = {w}, plan = {plan.entries}")
    print(f"Oracle W = {oracle_wasserstein(mu, nu, lookup)}")


if __name__ == "__main__":
    test_transport()
