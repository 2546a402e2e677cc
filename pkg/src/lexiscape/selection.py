"""Lexicase and epsilon-lexicase parent selection.

One selection event walks the objectives in a (usually random) order and
repeatedly discards candidates that fall more than epsilon below the
step's reference best. The three variants differ in where that reference
and epsilon come from:

  static        pass/fail is fixed per generation against the best score
                in the whole pool; each step keeps the candidates with
                the best pass/fail value.
  semi-dynamic  the reference best is recomputed over the surviving
                candidates, epsilon stays fixed for the generation.
  dynamic       both the best and the (median-absolute-deviation)
                epsilon are recomputed over the surviving candidates.

Plain lexicase is any variant with epsilon 0.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .landscape import ScoreProfile

EPSILON_MODES = ("constant", "mad")
VARIANTS = ("static", "semi-dynamic", "dynamic")


@dataclass(frozen=True)
class EpsilonPolicy:
    """How the retention threshold is chosen for a selection event."""

    mode: str = "constant"
    value: float = 0.0
    variant: str = "semi-dynamic"

    def __post_init__(self):
        if self.mode not in EPSILON_MODES:
            raise ValueError(f"unknown epsilon mode {self.mode!r}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.value < 0:
            raise ValueError("epsilon value must be non-negative")


@dataclass(frozen=True)
class SelectionPool:
    """Candidates for one selection event: (id, score profile) pairs."""

    members: tuple[tuple[object, ScoreProfile], ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("selection pool must be non-empty")
        dims = len(self.members[0][1])
        if any(len(p) != dims for _, p in self.members):
            raise ValueError("all profiles must have the same number of objectives")

    @classmethod
    def from_profiles(cls, profiles, ids=None) -> "SelectionPool":
        profiles = [tuple(p) for p in profiles]
        if ids is None:
            ids = range(len(profiles))
        return cls(tuple(zip(ids, profiles)))

    @property
    def dims(self) -> int:
        return len(self.members[0][1])

    def profiles(self) -> list[ScoreProfile]:
        return [p for _, p in self.members]


def _mad(values) -> float:
    center = statistics.median(values)
    return statistics.median(abs(v - center) for v in values)


def mad_epsilon(pool: SelectionPool, objective: int) -> float:
    """Median absolute deviation of one objective's scores across the pool."""
    if not 0 <= objective < pool.dims:
        raise ValueError(f"objective index {objective} out of range")
    return _mad([p[objective] for _, p in pool.members])


def mad_vector(profiles) -> list[float]:
    """Per-objective median absolute deviation over a list of profiles."""
    profiles = list(profiles)
    return [_mad([p[j] for p in profiles]) for j in range(len(profiles[0]))]


def generation_epsilons(pool: SelectionPool, policy: EpsilonPolicy) -> list[float]:
    """The per-objective epsilons fixed at the start of a generation."""
    if policy.mode == "constant":
        return [policy.value] * pool.dims
    return mad_vector(pool.profiles())


@dataclass(frozen=True)
class FilterStep:
    """One objective's filtering step, for tracing and tests."""

    objective: int
    epsilon: float
    best: float
    survivors: tuple[int, ...]  # member indices


def _check_ordering(ordering, dims: int) -> list[int]:
    order = [int(j) for j in ordering]
    if sorted(order) != list(range(dims)):
        raise ValueError("ordering must be a permutation of the objective indices")
    return order


def filter_cascade(
    pool: SelectionPool, ordering, policy: EpsilonPolicy
) -> tuple[list[int], list[FilterStep]]:
    """Run the deterministic part of one selection event.

    Returns the final candidate indices (still tied, if more than one)
    and the per-step records. Random tie-breaking is left to the caller.
    """
    order = _check_ordering(ordering, pool.dims)
    profiles = pool.profiles()
    eps_gen = generation_epsilons(pool, policy)

    passes = None
    if policy.variant == "static":
        full_best = [max(p[j] for p in profiles) for j in range(pool.dims)]
        passes = [
            [p[j] >= full_best[j] - eps_gen[j] for j in range(pool.dims)]
            for p in profiles
        ]

    candidates = list(range(len(profiles)))
    steps: list[FilterStep] = []
    for j in order:
        if len(candidates) == 1:
            break
        if policy.variant == "static":
            best_bit = max(passes[i][j] for i in candidates)
            kept = [i for i in candidates if passes[i][j] == best_bit]
            step_eps = eps_gen[j]
            best = full_best[j]  # pass/fail was fixed against the whole pool
        else:
            best = max(profiles[i][j] for i in candidates)
            if policy.variant == "dynamic" and policy.mode == "mad":
                step_eps = _mad([profiles[i][j] for i in candidates])
            else:
                step_eps = eps_gen[j]
            kept = [i for i in candidates if profiles[i][j] >= best - step_eps]
        steps.append(FilterStep(j, step_eps, best, tuple(kept)))
        candidates = kept
    return candidates, steps


def select_one(pool: SelectionPool, ordering, policy: EpsilonPolicy, rng) -> object:
    """One selection event with a fixed objective ordering."""
    candidates, _ = filter_cascade(pool, ordering, policy)
    if len(candidates) > 1:
        winner = candidates[int(rng.integers(len(candidates)))]
    else:
        winner = candidates[0]
    return pool.members[winner][0]


def select(pool: SelectionPool, policy: EpsilonPolicy, rng) -> object:
    """One selection event with a uniformly random objective ordering."""
    ordering = [int(j) for j in rng.permutation(pool.dims)]
    return select_one(pool, ordering, policy, rng)
