"""Integer landscape with maximally contradictory objectives.

A genotype is a vector of bounded non-negative integers; each position
feeds exactly one objective. Raising a position by one raises its own
objective score by one and lowers every other score by one, so the
objectives oppose each other as strongly as possible. The only
Pareto-optimal profiles a lexicase-style selector can ever pick here are
the per-objective specialists: the limit value in one position, zero in
the rest.
"""

from __future__ import annotations

Genotype = tuple[int, ...]
ScoreProfile = tuple[int, ...]


def validate_genotype(values, limit: int) -> Genotype:
    """Check bounds and return the genotype as a canonical tuple."""
    g = tuple(int(v) for v in values)
    if not g:
        raise ValueError("genotype must have at least one position")
    if limit < 1:
        raise ValueError("value limit must be at least 1")
    for v in g:
        if v < 0:
            raise ValueError(f"genotype value {v} is negative")
        if v > limit:
            raise ValueError(f"genotype value exceeds L ({v} > {limit})")
    return g


def evaluate_scores(genotype: Genotype) -> ScoreProfile:
    """Score each objective: own value minus the sum of all the others."""
    total = sum(genotype)
    return tuple(2 * v - total for v in genotype)


def adjacent_genotypes(genotype: Genotype, limit: int) -> set[Genotype]:
    """All genotypes one unit away in a single position.

    Moves that would leave [0, limit] are excluded, so boundary genotypes
    have fewer neighbors; the size is between D and 2D.
    """
    out = set()
    for k, v in enumerate(genotype):
        if v > 0:
            out.add(genotype[:k] + (v - 1,) + genotype[k + 1:])
        if v < limit:
            out.add(genotype[:k] + (v + 1,) + genotype[k + 1:])
    return out


def specialist_genotype(objective: int, dims: int, limit: int) -> Genotype:
    """The genotype that maxes out one objective: limit there, zero elsewhere."""
    return tuple(limit if k == objective else 0 for k in range(dims))


def is_optimal_genotype(genotype: Genotype, limit: int) -> bool:
    """True for specialist genotypes, the only Pareto-optimal ones reachable here."""
    return sum(genotype) == limit and limit in genotype


def pareto_selectable_set(dims: int, limit: int) -> set[ScoreProfile]:
    """The D score profiles with one score at +limit and the rest at -limit."""
    if dims < 1:
        raise ValueError("dims must be at least 1")
    if limit < 1:
        raise ValueError("limit must be at least 1")
    return {evaluate_scores(specialist_genotype(i, dims, limit)) for i in range(dims)}


def mutate(genotype: Genotype, limit: int, rate: float, rng) -> Genotype:
    """With probability `rate`, step to a uniformly chosen valid neighbor.

    Deterministic given the generator state; returns the input genotype
    unchanged otherwise.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError("mutation rate must lie in [0, 1]")
    if rate > 0 and rng.random() < rate:
        neighbors = sorted(adjacent_genotypes(genotype, limit))
        return neighbors[int(rng.integers(len(neighbors)))]
    return genotype
