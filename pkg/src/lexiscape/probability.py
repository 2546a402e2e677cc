"""Exact selection and survival probabilities, and the feasibility bound.

The central quantity is the probability that a particular individual
wins a single lexicase selection event. It is defined by a recursion
over (candidate subset, remaining objectives): with one candidate left
the probability is 1; with no objectives left every survivor is equally
likely; otherwise it is the average, over the remaining objectives, of
the value on the epsilon-elite subset for that objective. Computing it
naively is intractable, so the kernel deduplicates identical profiles,
drops objectives that no longer discriminate, and memoizes subproblems;
`p_lex_bruteforce` keeps an independent orderings-enumeration oracle for
cross-checking.

Survival over a run follows from the per-event probability: an
individual must win at least one of the S selection events in each of G
consecutive generations. Inverting that relation at a survival target t
gives the smallest per-event probability a specialist can get away
with, and hence the largest number of mutually contradictory objectives
a given (S, G, t) budget can support.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .landscape import ScoreProfile

ORACLE_MAX_DIMS = 8

# Scale of the published many-objective benchmark the specialist-survival
# helpers re-analyze: 512 selection events per generation, 50,000
# generations.
BENCHMARK_POPULATION_SIZE = 512
BENCHMARK_GENERATIONS = 50_000


@dataclass(frozen=True)
class SurvivalParams:
    """Selection events per generation, generations to survive, and the
    survival-probability threshold treated as 'reliable'."""

    population_size: int
    generations: int
    threshold: float = 0.5

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population size must be at least 1")
        if self.generations < 1:
            raise ValueError("generation count must be at least 1")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("survival threshold must lie strictly in (0, 1)")


@dataclass(frozen=True)
class DistinctPopulation:
    """Distinct score profiles with their multiplicities."""

    profiles: tuple[ScoreProfile, ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        if not self.profiles:
            raise ValueError("population must be non-empty")
        if len(self.profiles) != len(self.multiplicities):
            raise ValueError("profiles and multiplicities must align")
        if len(set(self.profiles)) != len(self.profiles):
            raise ValueError("profiles must be distinct")
        dims = len(self.profiles[0])
        if any(len(p) != dims for p in self.profiles):
            raise ValueError("all profiles must have the same number of objectives")
        if any(m < 1 for m in self.multiplicities):
            raise ValueError("multiplicities must be positive")

    @classmethod
    def from_profiles(cls, profiles) -> "DistinctPopulation":
        """Count duplicates, preserving first-seen order."""
        counts = Counter(tuple(p) for p in profiles)
        return cls(tuple(counts.keys()), tuple(counts.values()))

    @property
    def dims(self) -> int:
        return len(self.profiles[0])

    def total(self) -> int:
        return sum(self.multiplicities)


def _as_population(population) -> DistinctPopulation:
    if isinstance(population, DistinctPopulation):
        return population
    return DistinctPopulation.from_profiles(population)


def _epsilon_vector(epsilon, dims: int) -> np.ndarray:
    eps = np.broadcast_to(np.asarray(epsilon, dtype=np.float64), (dims,))
    if np.any(eps < 0):
        raise ValueError("epsilon must be non-negative")
    return eps


def p_lex_table(population, epsilon=0.0) -> dict[ScoreProfile, float]:
    """Per-instance selection probability for every profile in the population.

    Duplicated profiles share one entry; the value applies to each
    individual instance, so values weighted by multiplicity sum to 1.
    """
    pop = _as_population(population)
    eps = _epsilon_vector(epsilon, pop.dims)
    per_instance = kernels.plex_groups(
        np.array(pop.profiles, dtype=np.int64).reshape(len(pop.profiles), pop.dims),
        np.array(pop.multiplicities, dtype=np.int64),
        eps,
    )
    return {profile: float(p) for profile, p in zip(pop.profiles, per_instance)}


def p_lex(target, population, epsilon=0.0) -> float:
    """Probability that one given individual with the target profile wins
    a single selection event."""
    pop = _as_population(population)
    table = p_lex_table(pop, epsilon)
    key = tuple(target)
    if key not in table:
        raise ValueError("target profile is not in the population")
    return table[key]


def p_lex_bruteforce(target, population, epsilon=0.0) -> float:
    """Independent oracle: enumerate every objective ordering.

    Simulates the filtering cascade for each of the d! orderings with
    exact rational arithmetic and averages. Guarded to small objective
    counts; meant for tests and cross-validation, not production paths.
    """
    pop = _as_population(population)
    if pop.dims > ORACLE_MAX_DIMS:
        raise ValueError(f"brute force is limited to {ORACLE_MAX_DIMS} objectives")
    key = tuple(target)
    if key not in pop.profiles:
        raise ValueError("target profile is not in the population")
    eps = _epsilon_vector(epsilon, pop.dims)

    individuals = []
    for idx, mult in enumerate(pop.multiplicities):
        individuals.extend([idx] * mult)
    total = Fraction(0)
    n_orderings = 0
    target_idx = pop.profiles.index(key)
    for ordering in itertools.permutations(range(pop.dims)):
        n_orderings += 1
        cands = individuals
        for j in ordering:
            if len(cands) == 1:
                break
            best = max(pop.profiles[i][j] for i in cands)
            cands = [i for i in cands if pop.profiles[i][j] + eps[j] >= best]
        share = Fraction(1, len(cands))
        total += share * sum(1 for i in cands if i == target_idx)
    # Probability mass of the whole duplicate group, split evenly.
    return float(total / n_orderings / pop.multiplicities[target_idx])


def survival_vector(p, population_size: int, generations: int):
    """Probability of winning at least one of `population_size` selection
    events in each of `generations` consecutive generations.

    Evaluated in log space so that extreme (S, G) values neither overflow
    nor lose the near-0/near-1 tails.
    """
    p_arr = np.asarray(p, dtype=np.float64)
    with np.errstate(divide="ignore"):
        log_miss_all = population_size * np.log1p(-p_arr)
        win_once = -np.expm1(log_miss_all)
        out = np.exp(generations * np.log(win_once, where=win_once > 0,
                                          out=np.full_like(win_once, -np.inf)))
    if np.isscalar(p) or p_arr.ndim == 0:
        return float(out)
    return out


def p_survival(p, params: SurvivalParams) -> float:
    """Survival probability for a candidate selected with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return float(survival_vector(p, params.population_size, params.generations))


def min_viable_plex(params: SurvivalParams) -> float:
    """Smallest per-event selection probability whose survival probability
    still reaches the threshold."""
    # 1 - (1 - t^(1/G))^(1/S), via expm1/log1p to keep both tails exact.
    # Parameters beyond float range push the result below the smallest
    # positive double, which is what returning 0 means here.
    try:
        miss_one_gen = -math.expm1(math.log(params.threshold) / params.generations)
        if miss_one_gen <= 0.0:
            return 0.0
        return -math.expm1(math.log(miss_one_gen) / params.population_size)
    except OverflowError:
        return 0.0


def max_feasible_dimension(params: SurvivalParams) -> int | None:
    """Largest objective count whose specialists can reliably survive.

    A specialist is picked first with probability 1/D, so the bound is
    the largest D with min_viable_plex <= 1/D (equality counts as
    feasible). Returns None when the minimum viable probability
    underflows to zero, meaning no finite bound.
    """
    needed = min_viable_plex(params)
    if needed <= 0.0:
        return None
    return int(math.floor(1.0 / needed))


def specialist_survival(dims: int) -> float:
    """Survival probability of one specialist among `dims` specialist types
    at the published benchmark scale (512 events, 50,000 generations)."""
    if dims < 1:
        raise ValueError("dims must be at least 1")
    return float(
        survival_vector(1.0 / dims, BENCHMARK_POPULATION_SIZE, BENCHMARK_GENERATIONS)
    )


def all_specialists_survival(dims: int) -> float:
    """Probability that all `dims` distinct specialists survive the
    benchmark-scale run, treating their survivals as independent."""
    return specialist_survival(dims) ** dims


def feasibility_grid(population_sizes, generation_counts, threshold: float):
    """Yield (population_size, generations, max_feasible_dims) rows in
    deterministic row-major order."""
    for s in population_sizes:
        for g in generation_counts:
            params = SurvivalParams(int(s), int(g), threshold)
            yield int(s), int(g), max_feasible_dimension(params)


def log_spaced_ints(lo: int, hi: int, count: int) -> list[int]:
    """Distinct integers roughly evenly spaced on a log scale."""
    if lo < 1 or hi < lo or count < 1:
        raise ValueError("need 1 <= lo <= hi and count >= 1")
    values = np.geomspace(lo, hi, num=count)
    return sorted({int(round(v)) for v in values})
