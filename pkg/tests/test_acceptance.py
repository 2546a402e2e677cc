"""Acceptance suite: one test per criterion, each echoed in the summary.

Every test records a PASS/FAIL line (via the acceptance_log fixture)
before asserting, so the terminal summary always lists one line per
criterion. The reachability structure checks for epsilon 1 and 2 follow
a report-not-fail contract: if the reconstructed transition relation
stopped reproducing the published loop/sink structures, the summary
documents the structural difference as a deviation instead of silently
tuning the relation to force them.
"""

import io
import time

import numpy as np

from lexiscape.cli import main as cli_main
from lexiscape.model import ModelParams, estimate_p_fail, sweep, write_sweep_csv
from lexiscape.probability import (
    DistinctPopulation,
    SurvivalParams,
    all_specialists_survival,
    max_feasible_dimension,
    p_lex_bruteforce,
    p_lex_table,
    specialist_survival,
)
from lexiscape.reachability import (
    ReachState,
    explore,
    has_cycle,
    sink_nodes,
    strongly_connected_components,
)
from lexiscape.selection import EpsilonPolicy, SelectionPool, mad_epsilon


def desk_params(**overrides):
    base = dict(
        population_size=30,
        dims=5,
        value_limit=10,
        generations=50,
        mutation_rate=0.1,
        threshold=0.5,
        max_steps=10_000,
        seed=0,
    )
    base.update(overrides)
    return ModelParams(**base)


def random_population(rng):
    dims = int(rng.integers(1, 6))
    profiles = {}
    for _ in range(int(rng.integers(1, 7))):
        p = tuple(int(v) for v in rng.integers(-5, 6, size=dims))
        profiles[p] = int(rng.integers(1, 4))
    return DistinctPopulation(tuple(profiles), tuple(profiles.values()))


def test_criterion_1_oracle_equivalence(acceptance_log):
    rng = np.random.default_rng(1001)
    start = time.perf_counter()
    worst = 0.0
    pools = 0
    while pools < 200:
        pop = random_population(rng)
        eps = float(rng.choice([0.0, 1.0, 2.0]))
        table = p_lex_table(pop, eps)
        for profile in pop.profiles:
            delta = abs(table[profile] - p_lex_bruteforce(profile, pop, eps))
            worst = max(worst, delta)
        pools += 1
    elapsed = time.perf_counter() - start
    ok = worst < 1e-12 and elapsed < 30.0
    acceptance_log(
        "1 oracle equivalence",
        ok,
        f"200 pools, max |p_lex - oracle| = {worst:.2e}, {elapsed:.1f}s",
    )
    assert worst < 1e-12
    assert elapsed < 30.0


def test_criterion_2_single_specialist_crossing(acceptance_log):
    start = time.perf_counter()
    crossing = next(d for d in range(1, 200) if specialist_survival(d) < 0.5)
    elapsed = time.perf_counter() - start
    ok = crossing in (45, 46, 47) and elapsed < 1.0
    acceptance_log(
        "2 single-specialist survival crossing",
        ok,
        f"first dims below 0.5: {crossing} (expected within [45, 47]), {elapsed:.2f}s",
    )
    assert 45 <= crossing <= 47
    assert elapsed < 1.0


def test_criterion_3_joint_specialist_crossing(acceptance_log):
    start = time.perf_counter()
    crossing = next(d for d in range(1, 200) if all_specialists_survival(d) < 0.5)
    elapsed = time.perf_counter() - start
    ok = crossing in (34, 35, 36) and elapsed < 1.0
    acceptance_log(
        "3 joint-specialist survival crossing",
        ok,
        f"first dims below 0.5: {crossing} (expected within [34, 36]), {elapsed:.2f}s",
    )
    assert 34 <= crossing <= 36
    assert elapsed < 1.0


def test_criterion_4_feasibility_boundary(acceptance_log, capsys, tmp_path):
    big = max_feasible_dimension(SurvivalParams(512, 50_000, 0.5))
    small = max_feasible_dimension(SurvivalParams(10, 500, 0.5))
    out_path = tmp_path / "grid.csv"
    start = time.perf_counter()
    code = cli_main(
        ["feasibility", "--t", "0.5", "--grid", "--points", "40",
         "--out", str(out_path)]
    )
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    lines = out_path.read_text().strip().splitlines()
    grid_ok = code == 0 and lines[0] == "S,G,max_D" and len(lines) > 1000
    ok = big in (45, 46, 47) and small == 2 and elapsed < 5.0 and grid_ok
    acceptance_log(
        "4 feasibility boundary",
        ok,
        f"max_D(512, 50000) = {big}, max_D(10, 500) = {small}, "
        f"{len(lines) - 1}-cell grid in {elapsed:.2f}s",
    )
    assert big in (45, 46, 47)
    assert small == 2
    assert grid_ok
    assert elapsed < 5.0


def test_criterion_5_infeasible_region_law(acceptance_log):
    params = desk_params(population_size=5)
    start = time.perf_counter()
    estimate = estimate_p_fail(params, replicates=30)
    elapsed = time.perf_counter() - start
    ok = estimate.p_fail == 1.0
    acceptance_log(
        "5 infeasible-region failure law",
        ok,
        f"S=5 D=5 G=50: p_fail = {estimate.p_fail} "
        f"({estimate.failures}/30 failures), {elapsed:.0f}s",
    )
    assert estimate.p_fail == 1.0


def test_criterion_6_feasible_region_success(acceptance_log):
    params = desk_params(population_size=30, max_steps=100_000)
    start = time.perf_counter()
    estimate = estimate_p_fail(params, replicates=30)
    elapsed = time.perf_counter() - start
    ok = estimate.p_fail <= 0.5
    acceptance_log(
        "6 feasible-region success",
        ok,
        f"S=30 D=5 G=50: p_fail = {estimate.p_fail} "
        f"({estimate.failures}/30 failures), {elapsed:.0f}s",
    )
    assert estimate.p_fail <= 0.5


def test_criterion_7_monotone_in_population_size(acceptance_log):
    sizes = [5, 15, 30, 60]
    estimates = []
    start = time.perf_counter()
    for s in sizes:
        params = desk_params(population_size=s)
        estimates.append(estimate_p_fail(params, replicates=30).p_fail)
    elapsed = time.perf_counter() - start
    ok = all(b <= a + 0.15 for a, b in zip(estimates, estimates[1:]))
    acceptance_log(
        "7 failure probability monotone in population size",
        ok,
        f"p_fail over S={sizes}: {estimates} (tolerance +0.15), {elapsed:.0f}s",
    )
    assert ok


def test_criterion_8_reachability_classifications(acceptance_log):
    def reach_params(epsilon, **overrides):
        base = dict(
            population_size=30, dims=5, value_limit=10, generations=50,
            mutation_rate=0.0, threshold=0.5, max_steps=1,
            epsilon_policy=EpsilonPolicy(mode="constant", value=epsilon),
        )
        base.update(overrides)
        return ModelParams(**base)

    origin5 = ReachState.of([(0,) * 5])

    small = explore(
        ReachState.of([(0, 0, 0)]),
        reach_params(0.0, population_size=5, dims=3, value_limit=2),
        1000,
    )
    small_ok = small.classification == "unreachable"

    eps0 = explore(origin5, reach_params(0.0), 1000)
    eps0_ok = not has_cycle(eps0)

    # Report-not-fail structural checks for the published loop and sink
    # structures; a regression is documented in the summary, not hidden.
    eps1 = explore(origin5, reach_params(1.0), 1000)
    eps1_cycle = has_cycle(eps1)
    eps2 = explore(origin5, reach_params(2.0), 1000)
    eps2_sinks = sink_nodes(eps2)
    non_loops = [(a, b) for a, b in eps2.edges if a != b]
    biggest_scc = max(
        len(c) for c in strongly_connected_components(len(eps2.states), non_loops)
    )
    eps2_ok = bool(eps2_sinks) and biggest_scc > sum(eps2.explored) / 2

    acceptance_log(
        "8 reachability classifications",
        small_ok and eps0_ok,
        f"D=3 S=5 L=2: {small.classification} ({small.budget_used} expansions); "
        f"eps=0: cycle-free={eps0_ok} over {len(eps0.states)} states",
    )
    if eps1_cycle:
        acceptance_log(
            "8 reachability structure (eps=1)",
            True,
            f"cycle among {len(eps1.states)} non-optimal states, "
            f"classification {eps1.classification}",
        )
    else:
        acceptance_log(
            "8 reachability structure (eps=1)",
            True,
            "DEVIATION (documented): no cycle found; graph has "
            f"{len(eps1.states)} states, {len(eps1.edges)} edges, "
            f"classification {eps1.classification}",
        )
    if eps2_ok:
        acceptance_log(
            "8 reachability structure (eps=2)",
            True,
            f"{len(eps2_sinks)} sink node(s), largest component spans "
            f"{biggest_scc}/{sum(eps2.explored)} explored states",
        )
    else:
        acceptance_log(
            "8 reachability structure (eps=2)",
            True,
            "DEVIATION (documented): sinks="
            f"{len(eps2_sinks)}, largest component {biggest_scc} of "
            f"{sum(eps2.explored)} explored states",
        )
    assert small_ok
    assert small.budget_used == 1  # frontier exhausted immediately
    assert eps0_ok
    # Current transition relation does reproduce both structures; keep
    # them asserted so a silent regression cannot pass unnoticed, with
    # the documented-deviation text above carrying the diagnosis.
    assert eps1_cycle
    assert eps2_ok


def test_criterion_9_invariants(acceptance_log, capsys):
    # Selection-probability normalization on random pools.
    rng = np.random.default_rng(1002)
    worst_sum = 0.0
    for _ in range(100):
        pop = random_population(rng)
        eps = float(rng.choice([0.0, 0.5, 1.0]))
        table = p_lex_table(pop, eps)
        total = sum(table[p] * m for p, m in zip(pop.profiles, pop.multiplicities))
        worst_sum = max(worst_sum, abs(total - 1.0))
    norm_ok = worst_sum < 1e-9

    # Byte-identical sweep CSV under a fixed seed, through the library
    # writer and through the CLI.
    params = desk_params(dims=2, value_limit=3, mutation_rate=0.3, max_steps=100, seed=4)
    outputs = []
    for _ in range(2):
        rows = sweep(params, [5, 10], [2], [EpsilonPolicy()], replicates=4)
        buf = io.StringIO()
        write_sweep_csv(rows, buf)
        outputs.append(buf.getvalue())
    cli_outputs = []
    for _ in range(2):
        code = cli_main(
            ["sweep", "--S-grid", "5,10", "--D-grid", "2", "--epsilons", "0",
             "--L", "3", "--G", "50", "--mu", "0.3", "--steps", "100",
             "--replicates", "4", "--seed", "4"]
        )
        assert code == 0
        cli_outputs.append(capsys.readouterr().out)
    seed_ok = outputs[0] == outputs[1] and cli_outputs[0] == cli_outputs[1]

    # MAD epsilon against a sort-based oracle, exact.
    def sort_median(xs):
        xs = sorted(xs)
        mid = len(xs) // 2
        return xs[mid] if len(xs) % 2 else (xs[mid - 1] + xs[mid]) / 2

    mad_ok = True
    for _ in range(1000):
        values = [int(v) for v in rng.integers(-50, 51, size=int(rng.integers(1, 15)))]
        pool = SelectionPool.from_profiles([(v,) for v in values])
        oracle = sort_median([abs(v - sort_median(values)) for v in values])
        if mad_epsilon(pool, 0) != oracle:
            mad_ok = False
            break

    ok = norm_ok and seed_ok and mad_ok
    acceptance_log(
        "9 normalization, determinism, MAD oracle",
        ok,
        f"max |sum p_lex - 1| = {worst_sum:.1e}; identical sweep bytes: {seed_ok}; "
        f"MAD exact on 1000 lists: {mad_ok}",
    )
    assert norm_ok
    assert seed_ok
    assert mad_ok
