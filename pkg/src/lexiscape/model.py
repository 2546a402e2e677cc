"""Stochastic fuzzy-population model of lexicase selection dynamics.

Rather than simulating S concrete individuals, the model tracks which
score profiles are present. One time step stands for an epoch of G
generations spent traversing neutral space: every member's survival
probability over that epoch follows from its exact selection
probability, the member then re-enters the next population with that
probability, and each mutational neighbor enters with the survival
probability times the per-genome mutation rate. Contributions from
several sources combine like independent events. The resulting fuzzy
membership set is collapsed to a concrete population by independent
coin flips before the next step, since the selection-probability
computation needs a crisp set.

A run starts from the all-zeros genotype and counts as a success as
soon as any specialist (Pareto-optimal) genotype appears. Failure
probability over replicates is reported with a Wilson 95% interval.
"""

from __future__ import annotations

import csv
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .landscape import (
    Genotype,
    ScoreProfile,
    adjacent_genotypes,
    evaluate_scores,
    is_optimal_genotype,
)
from .probability import p_lex_table, survival_vector
from .selection import EpsilonPolicy, mad_vector

_PLEX_CACHE_LIMIT = 100_000


@dataclass(frozen=True)
class ModelParams:
    """Full parameter bundle for one model configuration."""

    population_size: int  # selection events per generation (S)
    dims: int  # number of objectives (D)
    value_limit: int  # largest genotype value (L)
    generations: int  # generations per epoch (G)
    mutation_rate: float  # per-genome, applied once per epoch (mu)
    threshold: float = 0.5  # survival threshold (t)
    epsilon_policy: EpsilonPolicy = field(default_factory=EpsilonPolicy)
    max_steps: int = 100_000
    seed: int = 0
    # Alternative mutation reading: share the per-genome rate across the
    # neighbor set instead of applying it to each neighbor.
    spread_mutation: bool = False

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population size must be at least 1")
        if self.dims < 1:
            raise ValueError("dims must be at least 1")
        if self.value_limit < 1:
            raise ValueError("value limit must be at least 1")
        if self.generations < 1:
            raise ValueError("generation count must be at least 1")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation rate must lie in [0, 1]")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must lie strictly in (0, 1)")
        if self.max_steps < 1:
            raise ValueError("step budget must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class RunOutcome:
    """What one model run produced."""

    found_optimum: bool
    first_hit_step: int | None
    discovered_profiles: set[ScoreProfile]
    steps_run: int
    trajectory: list[dict] | None = None


@dataclass(frozen=True)
class PFailEstimate:
    """Failure fraction over replicates with a Wilson 95% interval."""

    p_fail: float
    ci_low: float
    ci_high: float
    failures: int
    replicates: int


@lru_cache(maxsize=65536)
def _neighbors(genotype: Genotype, limit: int) -> tuple[Genotype, ...]:
    return tuple(sorted(adjacent_genotypes(genotype, limit)))


@lru_cache(maxsize=262144)
def _profile(genotype: Genotype) -> ScoreProfile:
    return evaluate_scores(genotype)


def step_epsilons(profiles, policy: EpsilonPolicy) -> tuple[float, ...]:
    """Per-objective epsilon for one step, recomputed over the crisp set."""
    if policy.mode == "constant":
        return (policy.value,) * len(profiles[0])
    return tuple(mad_vector(profiles))


def _member_survival(pop, params: ModelParams, plex_cache) -> np.ndarray:
    """Per-member survival probability over one epoch."""
    profiles = [_profile(g) for g in pop]
    eps = step_epsilons(profiles, params.epsilon_policy)
    key = (tuple(profiles), eps)
    p = plex_cache.get(key) if plex_cache is not None else None
    if p is None:
        table = p_lex_table(profiles, eps)
        p = np.array([table[prof] for prof in profiles])
        if plex_cache is not None:
            if len(plex_cache) >= _PLEX_CACHE_LIMIT:
                plex_cache.clear()
            plex_cache[key] = p
    return survival_vector(p, params.population_size, params.generations)


def _fuzzy_members(pop, params: ModelParams, plex_cache) -> list[tuple[Genotype, float]]:
    """Membership probabilities of the next population's fuzzy set."""
    survival = _member_survival(pop, params, plex_cache)
    membership: dict[Genotype, float] = {}

    def absorb(genotype, prob):
        if prob <= 0.0:
            return
        prev = membership.get(genotype, 0.0)
        membership[genotype] = 1.0 - (1.0 - prev) * (1.0 - prob)

    for genotype, stay in zip(pop, survival):
        absorb(genotype, stay)
        if params.mutation_rate > 0.0 and stay > 0.0:
            neighbors = _neighbors(genotype, params.value_limit)
            arrive = stay * params.mutation_rate
            if params.spread_mutation:
                arrive /= len(neighbors)
            for neighbor in neighbors:
                absorb(neighbor, arrive)
    return sorted(membership.items())


def _collapse(fuzzy, rng) -> tuple[Genotype, ...]:
    """De-fuzzify with independent coin flips; never return an empty set.

    If every flip fails, the highest-membership member is retained (ties
    resolved toward the lexicographically smallest genotype, which comes
    first in the sorted membership list).
    """
    draws = rng.random(len(fuzzy))
    crisp = tuple(g for (g, m), u in zip(fuzzy, draws) if u < m)
    if not crisp:
        crisp = (max(fuzzy, key=lambda item: item[1])[0],)
    return crisp


def step(pop, params: ModelParams, rng, plex_cache=None):
    """Advance one epoch: fuzzy update, then collapse to a crisp set.

    `pop` is an iterable of distinct genotypes; the return value is the
    next crisp population as a sorted tuple.
    """
    members = tuple(sorted(set(pop)))
    if not members:
        raise ValueError("population must be non-empty")
    return _collapse(_fuzzy_members(members, params, plex_cache), rng)


def run(
    params: ModelParams,
    rng=None,
    stop_on_hit: bool = True,
    collect_trajectory: bool = False,
) -> RunOutcome:
    """Run the model from the all-zeros genotype for up to max_steps epochs."""
    if rng is None:
        rng = np.random.default_rng(params.seed)
    plex_cache: dict = {}
    pop = ((0,) * params.dims,)
    discovered = {_profile(g) for g in pop}
    trajectory: list[dict] | None = [] if collect_trajectory else None
    first_hit = 0 if any(is_optimal_genotype(g, params.value_limit) for g in pop) else None

    steps_run = 0
    for step_index in range(1, params.max_steps + 1):
        if first_hit is not None and stop_on_hit:
            break
        fuzzy = _fuzzy_members(pop, params, plex_cache)
        pop = _collapse(fuzzy, rng)
        steps_run = step_index
        discovered.update(_profile(g) for g in pop)
        if collect_trajectory:
            trajectory.append(
                {
                    "step": step_index,
                    "memberships": [(g, m) for g, m in fuzzy],
                    "population": list(pop),
                }
            )
        if first_hit is None and any(
            is_optimal_genotype(g, params.value_limit) for g in pop
        ):
            first_hit = step_index

    return RunOutcome(
        found_optimum=first_hit is not None,
        first_hit_step=first_hit,
        discovered_profiles=discovered,
        steps_run=steps_run,
        trajectory=trajectory,
    )


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * ((phat * (1 - phat) + z2 / (4 * trials)) / trials) ** 0.5 / denom
    return max(0.0, center - half), min(1.0, center + half)


def _replicate_rng(entropy):
    return np.random.default_rng(np.random.SeedSequence(list(entropy)))


def _replicate_failed(task) -> bool:
    params, entropy = task
    return not run(params, rng=_replicate_rng(entropy)).found_optimum


def estimate_p_fail(
    params: ModelParams,
    replicates: int,
    entropy_prefix=None,
    workers: int = 1,
) -> PFailEstimate:
    """Failure fraction over independently seeded replicate runs.

    Replicate seeds derive from (entropy_prefix, replicate index), so the
    estimate is reproducible and independent of execution order; the
    prefix defaults to the params seed.
    """
    if replicates < 1:
        raise ValueError("replicates must be at least 1")
    prefix = tuple(entropy_prefix) if entropy_prefix is not None else (params.seed,)
    tasks = [(params, prefix + (rep,)) for rep in range(replicates)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_replicate_failed, tasks))
    else:
        outcomes = [_replicate_failed(t) for t in tasks]
    failures = sum(outcomes)
    ci_low, ci_high = wilson_interval(failures, replicates)
    return PFailEstimate(failures / replicates, ci_low, ci_high, failures, replicates)


SWEEP_CSV_HEADER = (
    "S",
    "D",
    "epsilon_mode",
    "epsilon_value",
    "G",
    "L",
    "mu",
    "t",
    "max_steps",
    "replicates",
    "failures",
    "p_fail",
    "ci_low",
    "ci_high",
)


@dataclass(frozen=True)
class SweepRow:
    population_size: int
    dims: int
    epsilon_mode: str
    epsilon_value: float
    generations: int
    value_limit: int
    mutation_rate: float
    threshold: float
    max_steps: int
    replicates: int
    failures: int
    p_fail: float
    ci_low: float
    ci_high: float

    def as_csv(self) -> list[str]:
        return [
            str(self.population_size),
            str(self.dims),
            self.epsilon_mode,
            str(self.epsilon_value),
            str(self.generations),
            str(self.value_limit),
            str(self.mutation_rate),
            str(self.threshold),
            str(self.max_steps),
            str(self.replicates),
            str(self.failures),
            str(self.p_fail),
            str(self.ci_low),
            str(self.ci_high),
        ]


def _policy_entropy(policy: EpsilonPolicy) -> tuple[int, int]:
    mode_code = 0 if policy.mode == "constant" else 1
    value_bits = struct.unpack("<Q", struct.pack("<d", policy.value))[0]
    return mode_code, value_bits


def sweep(
    base: ModelParams,
    population_sizes,
    dims_values,
    epsilon_policies,
    replicates: int,
    workers: int = 1,
) -> list[SweepRow]:
    """Failure-probability grid over population size, objective count, and
    epsilon policy.

    Rows come out in deterministic grid order (population size outermost,
    then dims, then policy). Per-cell replicate seeds derive from the
    base seed plus the cell coordinates, so reordering or splitting the
    grid does not change any cell's result.
    """
    cells = [
        (s, d, pol)
        for s in population_sizes
        for d in dims_values
        for pol in epsilon_policies
    ]
    if not cells:
        raise ValueError("sweep grid must be non-empty")
    rows = []
    for s, d, policy in cells:
        params = replace(
            base,
            population_size=int(s),
            dims=int(d),
            epsilon_policy=policy,
        )
        mode_code, value_bits = _policy_entropy(policy)
        prefix = (base.seed, int(s), int(d), mode_code, value_bits)
        estimate = estimate_p_fail(
            params, replicates, entropy_prefix=prefix, workers=workers
        )
        rows.append(
            SweepRow(
                population_size=int(s),
                dims=int(d),
                epsilon_mode=policy.mode,
                epsilon_value=policy.value,
                generations=base.generations,
                value_limit=base.value_limit,
                mutation_rate=base.mutation_rate,
                threshold=base.threshold,
                max_steps=base.max_steps,
                replicates=replicates,
                failures=estimate.failures,
                p_fail=estimate.p_fail,
                ci_low=estimate.ci_low,
                ci_high=estimate.ci_high,
            )
        )
    return rows


def write_sweep_csv(rows, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_csv())
