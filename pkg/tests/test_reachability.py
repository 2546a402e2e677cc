"""Reachability: the survival filter, successor relation, and exploration."""

import numpy as np
import pytest

from lexiscape.landscape import specialist_genotype
from lexiscape.model import ModelParams, run
from lexiscape.reachability import (
    ReachState,
    explore,
    export_graph,
    has_cycle,
    sink_nodes,
    strongly_connected_components,
    successors,
    survival_filter,
)
from lexiscape.selection import EpsilonPolicy


def params(**overrides):
    base = dict(
        population_size=30,
        dims=5,
        value_limit=10,
        generations=50,
        mutation_rate=0.0,
        threshold=0.5,
        max_steps=1,
        seed=0,
    )
    base.update(overrides)
    return ModelParams(**base)


def origin_state(dims):
    return ReachState.of([(0,) * dims])


class TestReachState:
    def test_canonicalizes(self):
        state = ReachState.of([(1, 0), (0, 0), (1, 0)])
        assert state.composition == ((0, 0), (1, 0))

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            ReachState(((1, 0), (0, 0)))
        with pytest.raises(ValueError):
            ReachState(())

    def test_optimum_detection(self):
        assert ReachState.of([(0, 0), (3, 0)]).contains_optimum(3)
        assert not ReachState.of([(0, 0), (2, 1)]).contains_optimum(3)


class TestSurvivalFilter:
    def test_singleton_is_fixed(self):
        assert survival_filter(((0, 0, 0),), params(dims=3)) == ((0, 0, 0),)

    def test_idempotent(self):
        rng = np.random.default_rng(40)
        p = params(dims=3, value_limit=3)
        for _ in range(60):
            size = int(rng.integers(1, 5))
            comp = {
                tuple(int(v) for v in rng.integers(0, 4, size=3)) for _ in range(size)
            }
            once = survival_filter(tuple(sorted(comp)), p)
            twice = survival_filter(once, p)
            assert once == twice

    def test_infeasible_specialist_dies(self):
        p = params(population_size=5, dims=3, value_limit=2)
        comp = ((0, 0, 0), (1, 0, 0))
        assert survival_filter(comp, p) == ((0, 0, 0),)

    def test_feasible_specialist_survives(self):
        p = params(population_size=30, dims=5)
        comp = tuple(sorted([(0,) * 5, (1, 0, 0, 0, 0)]))
        assert survival_filter(comp, p) == comp

    def test_simultaneous_collapse_retains_best(self):
        # Two pure antagonists at deeply infeasible scale both fall below
        # the threshold in the same pass; the guard keeps exactly one.
        p = params(population_size=5, dims=2, value_limit=3, generations=500)
        comp = ((0, 3), (3, 0))
        result = survival_filter(comp, p)
        assert result == ((0, 3),)


class TestSuccessors:
    def test_origin_successors_feasible(self):
        p = params()
        succ = successors(origin_state(5), p)
        comps = {s.composition for s in succ}
        origin = (0,) * 5
        assert (origin,) in comps  # self transition
        for i in range(5):
            mutant = tuple(1 if k == i else 0 for k in range(5))
            assert tuple(sorted([origin, mutant])) in comps
        assert len(comps) == 6

    def test_origin_successors_infeasible_collapse(self):
        p = params(population_size=5, dims=3, value_limit=2)
        succ = successors(origin_state(3), p)
        assert {s.composition for s in succ} == {((0, 0, 0),)}

    def test_dominator_prunes_dominated(self):
        # (1,1,0) ties (0,0,0) on the first two objectives and loses the
        # third, so every discriminating objective excludes it: selection
        # probability 0, removed by the filter everywhere.
        p = params(dims=3, value_limit=4)
        dominated = (1, 1, 0)
        state = ReachState.of([(0, 0, 0), dominated])
        succ = successors(state, p)
        for s in succ:
            assert dominated not in s.composition
        assert ((0, 0, 0),) in {s.composition for s in succ}


class TestExplore:
    def test_start_containing_optimum(self):
        p = params(dims=3, value_limit=2)
        start = ReachState.of([specialist_genotype(0, 3, 2)])
        graph = explore(start, p, 100)
        assert graph.classification == "reachable"
        assert len(graph.states) == 1
        assert graph.budget_used == 0

    def test_small_infeasible_is_unreachable(self):
        p = params(population_size=5, dims=3, value_limit=2)
        graph = explore(origin_state(3), p, 1000)
        assert graph.classification == "unreachable"
        assert len(graph.states) == 1
        assert graph.edges == [(0, 0)]

    def test_unreachable_region_is_closed(self):
        # Re-expanding every node of an unreachable graph must stay
        # inside the node set and hit no optimum.
        p = params(
            population_size=30, epsilon_policy=EpsilonPolicy(value=1.0)
        )
        graph = explore(origin_state(5), p, 2000)
        assert graph.classification == "unreachable"
        known = {s.composition for s in graph.states}
        for state in graph.states:
            assert not state.contains_optimum(p.value_limit)
            for succ in successors(state, p):
                assert succ.composition in known

    def test_budget_exhaustion_is_indeterminate(self):
        p = params()
        graph = explore(origin_state(5), p, 10)
        assert graph.classification == "indeterminate"
        assert graph.budget_used == 10
        assert sum(graph.explored) == 10
        assert len(graph.states) > 10  # frontier nodes discovered but unexpanded

    def test_deterministic(self):
        p = params()
        a = explore(origin_state(5), p, 50)
        b = explore(origin_state(5), p, 50)
        assert [s.composition for s in a.states] == [s.composition for s in b.states]
        assert a.edges == b.edges
        assert a.classification == b.classification

    def test_zero_epsilon_graph_is_acyclic(self):
        p = params()
        graph = explore(origin_state(5), p, 300)
        assert not has_cycle(graph)

    def test_unreachable_never_reached_by_model(self):
        # Outcome-level agreement: where the abstraction proves the
        # optimum unreachable, no stochastic replicate may find one. The
        # limit is 4 rather than 2 so that the model's sub-threshold
        # transients (which the abstraction rounds to extinction) would
        # need a ~1e-9 chain of flukes to reach a specialist.
        p_reach = params(population_size=5, dims=3, value_limit=4)
        graph = explore(origin_state(3), p_reach, 1000)
        assert graph.classification == "unreachable"
        p_model = ModelParams(
            population_size=5, dims=3, value_limit=4, generations=50,
            mutation_rate=0.1, threshold=0.5, max_steps=500, seed=0,
        )
        for rep in range(30):
            outcome = run(p_model, rng=np.random.default_rng(rep))
            assert not outcome.found_optimum

    def test_rejects_zero_budget(self):
        with pytest.raises(ValueError):
            explore(origin_state(3), params(dims=3), 0)


class TestGraphAnalysis:
    def test_scc_on_known_graph(self):
        edges = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]
        comps = strongly_connected_components(5, edges)
        assert sorted(map(tuple, comps)) == [(0, 1, 2), (3,), (4,)]

    def test_epsilon_one_loop(self):
        p = params(epsilon_policy=EpsilonPolicy(value=1.0))
        graph = explore(origin_state(5), p, 2000)
        assert has_cycle(graph)
        assert not any(
            s.contains_optimum(p.value_limit) for s in graph.states
        )

    def test_epsilon_two_sink_and_big_component(self):
        p = params(epsilon_policy=EpsilonPolicy(value=2.0))
        graph = explore(origin_state(5), p, 1000)
        assert sink_nodes(graph)
        non_loops = [(a, b) for a, b in graph.edges if a != b]
        comps = strongly_connected_components(len(graph.states), non_loops)
        explored_count = sum(graph.explored)
        assert max(len(c) for c in comps) > explored_count / 2

    def test_export_schema(self):
        p = params(population_size=5, dims=3, value_limit=2)
        graph = explore(origin_state(3), p, 10)
        doc = export_graph(graph)
        assert doc["classification"] == "unreachable"
        assert doc["n_nodes"] == 1
        node = doc["nodes"][0]
        assert node["genotypes"] == ["0,0,0"]
        assert node["x"] == node["n_genotypes"] == 1
        assert node["y"] == node["max_distance"] == 0
        assert node["explored"] is True
        assert node["contains_optimum"] is False
        assert doc["edges"] == [[0, 0]]
