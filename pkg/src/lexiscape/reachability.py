"""Reachability analysis over population-composition state space.

Under the survival-threshold abstraction everything is deterministic: a
member whose survival probability reaches the threshold is guaranteed to
persist for an epoch, everyone else is guaranteed to vanish. A state is
a set of distinct genotypes; its successors are the filtered state
itself plus, for each survivor, each single-mutant extension, with the
survival filter re-applied until the composition is stable (removing
one member changes everyone else's selection probability, so one pass
is not enough).

Exploration is breadth-first from a start state with deterministic tie
breaking, bounded by a node budget, and stops with one of three
verdicts: `reachable` (a visited state contains a Pareto-optimal
genotype), `unreachable` (the frontier emptied first, so the explored
region is closed and optimum-free), or `indeterminate` (budget ran out
first).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .landscape import Genotype, is_optimal_genotype
from .model import ModelParams, _neighbors, _profile, step_epsilons
from .probability import p_lex_table, survival_vector

Composition = tuple[Genotype, ...]

CLASSIFICATIONS = ("reachable", "unreachable", "indeterminate")


@dataclass(frozen=True)
class ReachState:
    """A concrete population composition in canonical (sorted) form."""

    composition: Composition

    def __post_init__(self):
        if not self.composition:
            raise ValueError("composition must be non-empty")
        if list(self.composition) != sorted(set(self.composition)):
            raise ValueError("composition must be sorted and free of duplicates")

    @classmethod
    def of(cls, genotypes) -> "ReachState":
        return cls(tuple(sorted({tuple(g) for g in genotypes})))

    def contains_optimum(self, limit: int) -> bool:
        return any(is_optimal_genotype(g, limit) for g in self.composition)


@dataclass
class ReachGraph:
    """The explored transition graph plus the verdict that ended exploration."""

    params: ModelParams
    states: list[ReachState]
    explored: list[bool]
    edges: list[tuple[int, int]]
    classification: str
    budget_used: int


def _survivor_mask(composition: Composition, params: ModelParams, plex_cache) -> list[bool]:
    profiles = [_profile(g) for g in composition]
    eps = step_epsilons(profiles, params.epsilon_policy)
    key = (tuple(profiles), eps)
    p = plex_cache.get(key) if plex_cache is not None else None
    if p is None:
        table = p_lex_table(profiles, eps)
        p = np.array([table[prof] for prof in profiles])
        if plex_cache is not None:
            plex_cache[key] = p
    survival = survival_vector(p, params.population_size, params.generations)
    return [s >= params.threshold for s in survival]


def survival_filter(
    composition: Composition, params: ModelParams, plex_cache=None
) -> Composition:
    """Drop members below the survival threshold until the set is stable.

    If every member drops at once (possible, since the threshold rule
    removes them in parallel), the member with the highest survival
    probability is kept instead, mirroring the stochastic model's
    extinction guard; a singleton always survives, so this is a fixed
    point too.
    """
    current = tuple(sorted(set(composition)))
    if not current:
        raise ValueError("composition must be non-empty")
    while len(current) > 1:
        keep = _survivor_mask(current, params, plex_cache)
        if all(keep):
            return current
        if not any(keep):
            profiles = [_profile(g) for g in current]
            eps = step_epsilons(profiles, params.epsilon_policy)
            table = p_lex_table(profiles, eps)
            survival = [
                survival_vector(table[prof], params.population_size, params.generations)
                for prof in profiles
            ]
            best = max(survival)
            return (current[survival.index(best)],)
        current = tuple(g for g, k in zip(current, keep) if k)
    return current


def successors(state: ReachState, params: ModelParams, plex_cache=None) -> set[ReachState]:
    """Deterministic successor states under the threshold abstraction.

    The filtered core itself is always a successor (nothing new arrives),
    and each single mutant of each survivor extends it; every candidate
    is filtered back to a fixed point before being reported.
    """
    if plex_cache is None:
        plex_cache = {}
    core = survival_filter(state.composition, params, plex_cache)
    results = {core}
    core_set = set(core)
    for genotype in core:
        for neighbor in _neighbors(genotype, params.value_limit):
            if neighbor in core_set:
                continue
            candidate = tuple(sorted(core_set | {neighbor}))
            results.add(survival_filter(candidate, params, plex_cache))
    return {ReachState(c) for c in results}


def explore(start: ReachState, params: ModelParams, node_budget: int = 1000) -> ReachGraph:
    """Breadth-first exploration from `start`, bounded by `node_budget`
    expanded states; ties within a layer break on canonical state order."""
    if node_budget < 1:
        raise ValueError("node budget must be at least 1")
    limit = params.value_limit
    states = [start]
    index = {start.composition: 0}
    explored = [False]
    edges: set[tuple[int, int]] = set()
    plex_cache: dict = {}

    if start.contains_optimum(limit):
        return ReachGraph(params, states, explored, [], "reachable", 0)

    frontier: list[tuple[int, Composition, int]] = [(0, start.composition, 0)]
    budget_used = 0
    classification = None
    while frontier:
        if budget_used >= node_budget:
            classification = "indeterminate"
            break
        depth, _, idx = heapq.heappop(frontier)
        explored[idx] = True
        budget_used += 1
        for succ in sorted(successors(states[idx], params, plex_cache),
                           key=lambda s: s.composition):
            j = index.get(succ.composition)
            if j is None:
                j = len(states)
                index[succ.composition] = j
                states.append(succ)
                explored.append(False)
                edges.add((idx, j))
                if succ.contains_optimum(limit):
                    classification = "reachable"
                    break
                heapq.heappush(frontier, (depth + 1, succ.composition, j))
            else:
                edges.add((idx, j))
        if classification is not None:
            break
    if classification is None:
        classification = "unreachable"
    return ReachGraph(params, states, explored, sorted(edges), classification, budget_used)


def export_graph(graph: ReachGraph) -> dict:
    """JSON-ready document with per-node layout attributes.

    x is the number of unique genotypes in the composition and y the
    largest total distance of any member from the all-zeros origin,
    matching the layout convention used for state-space plots.
    """
    limit = graph.params.value_limit
    nodes = []
    for i, state in enumerate(graph.states):
        size = len(state.composition)
        max_distance = max(sum(g) for g in state.composition)
        nodes.append(
            {
                "id": i,
                "genotypes": [",".join(str(v) for v in g) for g in state.composition],
                "n_genotypes": size,
                "max_distance": max_distance,
                "explored": graph.explored[i],
                "contains_optimum": state.contains_optimum(limit),
                "x": size,
                "y": max_distance,
            }
        )
    return {
        "classification": graph.classification,
        "budget_used": graph.budget_used,
        "n_nodes": len(nodes),
        "nodes": nodes,
        "edges": [list(e) for e in graph.edges],
    }


def strongly_connected_components(n_nodes: int, edges) -> list[list[int]]:
    """Tarjan's algorithm, iterative to avoid recursion limits."""
    adjacency: list[list[int]] = [[] for _ in range(n_nodes)]
    for a, b in edges:
        adjacency[a].append(b)
    order = [-1] * n_nodes
    low = [0] * n_nodes
    on_stack = [False] * n_nodes
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(n_nodes):
        if order[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, edge_pos = work.pop()
            if edge_pos == 0:
                order[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            for pos in range(edge_pos, len(adjacency[node])):
                child = adjacency[node][pos]
                if order[child] == -1:
                    work.append((node, pos + 1))
                    work.append((child, 0))
                    advanced = True
                    break
                if on_stack[child]:
                    low[node] = min(low[node], order[child])
            if advanced:
                continue
            if low[node] == order[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack[member] = False
                    component.append(member)
                    if member == node:
                        break
                components.append(sorted(component))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return components


def has_cycle(graph: ReachGraph, ignore_self_loops: bool = True) -> bool:
    """True when the explored edge set contains a directed cycle."""
    edges = graph.edges
    if not ignore_self_loops and any(a == b for a, b in edges):
        return True
    edges = [(a, b) for a, b in edges if a != b]
    return any(len(c) > 1 for c in strongly_connected_components(len(graph.states), edges))


def sink_nodes(graph: ReachGraph) -> list[int]:
    """Explored nodes with no outgoing edge to a different node."""
    outgoing = {a for a, b in graph.edges if a != b}
    return [i for i, done in enumerate(graph.explored) if done and i not in outgoing]
