"""Hyperedge coverage, the greedy transversal summarizers, and exhaustive oracles.

Node arguments are 0-based positions in ``Hypergraph.node_weights``; a
``Summary`` reports both positions and external labels.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError, SizeGuardError
from .themegraph import Hypergraph

TOL = 1e-9
MAX_BRUTE_FORCE_NODES = 20


def coverage(nodes: Iterable[int], graph: Hypergraph) -> float:
    covered = set()
    for i in nodes:
        covered.update(graph.incidence[i])
    return math.fsum(graph.edge_weights[e] for e in covered)


@dataclass(frozen=True)
class Step:
    node: int
    sentence_id: object
    ratio: float
    gain: float
    covered_after: float


@dataclass(frozen=True)
class Summary:
    nodes: tuple[int, ...]
    sentence_ids: tuple
    total_length: float
    covered_weight: float
    coverage_fraction: float
    trace: tuple[Step, ...] = ()
    selection_order: tuple[int, ...] = field(default=(), repr=False)

    @property
    def coverage_before_last(self) -> float:
        """f(S_{T-1}): coverage before the last greedy step (0 for an empty trace)."""
        if not self.trace:
            return 0.0
        return self.trace[-1].covered_after - self.trace[-1].gain


def _summary(graph: Hypergraph, chosen: Sequence[int], trace, order: Sequence[int] | None) -> Summary:
    nodes = tuple(sorted(chosen, key=lambda i: order[i])) if order else tuple(sorted(chosen))
    covered = coverage(nodes, graph)
    total = graph.total_weight
    return Summary(
        nodes=nodes,
        sentence_ids=tuple(graph.labels[i] for i in nodes),
        total_length=math.fsum(graph.node_weights[i] for i in nodes),
        covered_weight=covered,
        coverage_fraction=min(1.0, covered / total) if total > 0 else 0.0,
        trace=tuple(trace),
        selection_order=tuple(chosen),
    )


class _Greedy:
    """Marginal gains against the currently uncovered hyperedges."""

    def __init__(self, graph: Hypergraph):
        self.graph = graph
        self.gain = [math.fsum(graph.edge_weights[e] for e in inc) for inc in graph.incidence]
        self.open = [len(inc) for inc in graph.incidence]
        self.covered = [False] * len(graph.edges)
        self.covered_weight = 0.0
        self.pool = set(range(graph.n_nodes))

    def marginal(self, i: int) -> float:
        # exact zero once every incident hyperedge is covered
        return self.gain[i] if self.open[i] else 0.0

    def best(self, cap: float = math.inf) -> int:
        # highest ratio, lowest position on ties; gains above ``cap`` count as ``cap``
        phi = self.graph.node_weights
        return min(self.pool, key=lambda i: (-min(self.marginal(i), cap) / phi[i], i))

    def take(self, s: int) -> float:
        g = self.graph
        gained = 0.0
        for e in g.incidence[s]:
            if self.covered[e]:
                continue
            self.covered[e] = True
            w = g.edge_weights[e]
            gained += w
            for j in g.edges[e]:
                self.gain[j] -= w
                self.open[j] -= 1
        self.covered_weight += gained
        return gained


def tl_transum(graph: Hypergraph, length: float, order: Sequence[int] | None = None) -> Summary:
    """Greedy budgeted transversal (target length).

    Scans nodes by decreasing marginal coverage per unit length, keeping
    each one that still fits the budget, then returns the better of that
    set and the best single feasible node. ``order`` gives each node's
    output rank (corpus order); positions are used when omitted.
    """
    phi = graph.node_weights
    if graph.n_nodes == 0 or length < min(phi):
        warnings.warn(f"target length {length} is below the shortest sentence; empty summary")
        return _summary(graph, [], [], order)

    state = _Greedy(graph)
    chosen: list[int] = []
    trace = []
    used = 0.0
    while state.pool:
        s = state.best()
        state.pool.discard(s)
        if phi[s] + used <= length + TOL:
            ratio = state.marginal(s) / phi[s]
            gained = state.take(s)
            used += phi[s]
            chosen.append(s)
            trace.append(Step(s, graph.labels[s], ratio, gained, state.covered_weight))

    feasible = [i for i in range(graph.n_nodes) if phi[i] <= length + TOL]
    single = max(feasible, key=lambda i: (coverage([i], graph), -i))
    single_cov = coverage([single], graph)
    if single_cov > coverage(chosen, graph) + TOL:
        step = Step(single, graph.labels[single], single_cov / phi[single], single_cov, single_cov)
        return _summary(graph, [single], [step], order)
    return _summary(graph, chosen, trace, order)


def tc_transum(
    graph: Hypergraph, gamma: float, order: Sequence[int] | None = None, truncated: bool = False
) -> Summary:
    """Greedy soft transversal (target coverage ``gamma`` of the total hyperedge weight).

    By default nodes are ranked by their full marginal coverage per unit
    length, so the selection for a smaller ``gamma`` is always a prefix of
    the selection for a larger one and the summary length grows with
    ``gamma``. With ``truncated`` each gain is capped at the coverage still
    missing, which is Wolsey's greedy for min(gamma * W, f) and carries its
    logarithmic cost guarantee, but lengths are no longer monotone in
    ``gamma``.
    """
    if not 0 <= gamma <= 1:
        raise InputError(f"gamma must lie in [0, 1], got {gamma}")
    target = gamma * graph.total_weight
    phi = graph.node_weights
    state = _Greedy(graph)
    chosen: list[int] = []
    trace = []
    while state.pool and state.covered_weight < target - TOL:
        need = target - state.covered_weight if truncated else math.inf
        s = state.best(need)
        if state.marginal(s) <= 0:
            break
        state.pool.discard(s)
        ratio = min(state.marginal(s), need) / phi[s]
        gained = state.take(s)
        chosen.append(s)
        trace.append(Step(s, graph.labels[s], ratio, gained, state.covered_weight))
    return _summary(graph, chosen, trace, order)


def _subset_tables(graph: Hypergraph):
    n = graph.n_nodes
    if n > MAX_BRUTE_FORCE_NODES:
        raise SizeGuardError(f"exhaustive search limited to {MAX_BRUTE_FORCE_NODES} nodes, got {n}")
    inc_mask = [sum(1 << e for e in inc) for inc in graph.incidence]
    cov_mask = [0] * (1 << n)
    cost = [0.0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        cov_mask[mask] = cov_mask[rest] | inc_mask[i]
        cost[mask] = cost[rest] + graph.node_weights[i]
    weight_cache: dict[int, float] = {}

    def weight(cm: int) -> float:
        if cm not in weight_cache:
            weight_cache[cm] = math.fsum(
                w for e, w in enumerate(graph.edge_weights) if cm >> e & 1
            )
        return weight_cache[cm]

    return cov_mask, cost, weight


def _members(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def brute_force_budgeted(graph: Hypergraph, length: float) -> tuple[float, tuple[int, ...]]:
    """Exact maximum coverage under a total node weight budget."""
    cov_mask, cost, weight = _subset_tables(graph)
    best_val, best_cost, best_mask = 0.0, 0.0, 0
    for mask in range(1, len(cost)):
        if cost[mask] > length + TOL:
            continue
        val = weight(cov_mask[mask])
        if val > best_val + TOL or (abs(val - best_val) <= TOL and cost[mask] < best_cost):
            best_val, best_cost, best_mask = val, cost[mask], mask
    return best_val, _members(best_mask)


def brute_force_soft(graph: Hypergraph, gamma: float) -> tuple[float, tuple[int, ...]]:
    """Exact minimum total node weight reaching coverage ``gamma * W``."""
    if not 0 <= gamma <= 1:
        raise InputError(f"gamma must lie in [0, 1], got {gamma}")
    cov_mask, cost, weight = _subset_tables(graph)
    target = gamma * graph.total_weight
    if target <= TOL:
        return 0.0, ()
    best_cost, best_mask = math.inf, None
    for mask in range(1, len(cost)):
        if cost[mask] < best_cost and weight(cov_mask[mask]) >= target - TOL:
            best_cost, best_mask = cost[mask], mask
    return best_cost, _members(best_mask)
