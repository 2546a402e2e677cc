"""Lexicase selection under maximally contradictory objectives.

An analysis engine for lexicase and epsilon-lexicase selection: exact
selection and survival probabilities, the feasibility bound relating
population size, run length, and objective count, a stochastic
fuzzy-population model for failure-probability estimation, and
reachability analysis over population-composition state space.
"""

from .landscape import (
    Genotype,
    ScoreProfile,
    adjacent_genotypes,
    evaluate_scores,
    is_optimal_genotype,
    mutate,
    pareto_selectable_set,
    specialist_genotype,
    validate_genotype,
)
from .model import (
    ModelParams,
    PFailEstimate,
    RunOutcome,
    SweepRow,
    estimate_p_fail,
    run,
    step,
    sweep,
    wilson_interval,
    write_sweep_csv,
)
from .probability import (
    DistinctPopulation,
    SurvivalParams,
    all_specialists_survival,
    feasibility_grid,
    max_feasible_dimension,
    min_viable_plex,
    p_lex,
    p_lex_bruteforce,
    p_lex_table,
    p_survival,
    specialist_survival,
    survival_vector,
)
from .reachability import (
    ReachGraph,
    ReachState,
    explore,
    export_graph,
    successors,
    survival_filter,
)
from .selection import (
    EpsilonPolicy,
    SelectionPool,
    filter_cascade,
    mad_epsilon,
    mad_vector,
    select,
    select_one,
)

__version__ = "0.1.0"
