"""Command-line interface.

Subcommands expose every computation: `score`, `mad`, `select-trace`,
`plex`, `survival`, `feasibility`, `run`, `sweep`, `reach`. All
stochastic subcommands are deterministic under a fixed --seed, numeric
defaults mirror the full-scale study configuration, and `--preset desk`
shrinks them to desk-scale values for quick runs. Values resolve as:
explicit flag > config file (--config, KEY=VALUE lines) > preset >
built-in default.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import landscape, model, probability, reachability
from .selection import EpsilonPolicy, SelectionPool, filter_cascade, mad_epsilon, mad_vector


class CliError(Exception):
    """Validation failure reported as a one-line diagnostic, exit code 1."""


# Built-in defaults follow the full-scale study setup; the desk preset is
# the down-scaled configuration used for fast exploratory runs.
DEFAULTS = {
    "D": 5,
    "L": 10,
    "S": 30,
    "G": 500,
    "mu": 0.01,
    "t": 0.5,
    "epsilon": 0.0,
    "epsilon_mode": "constant",
    "variant": "semi-dynamic",
    "steps": 100_000,
    "replicates": 30,
    "seed": 0,
    "budget": 1000,
}

PRESETS = {
    "desk": {"G": 50, "D": 5, "L": 10, "mu": 0.1, "steps": 10_000},
}

_INT_KEYS = {"D", "L", "S", "G", "steps", "replicates", "seed", "budget"}
_FLOAT_KEYS = {"mu", "t", "epsilon"}


def _read_config(path: str) -> dict:
    values = {}
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise CliError(f"{path}:{lineno}: expected KEY=VALUE")
                key, value = (part.strip() for part in line.split("=", 1))
                values[key] = value
    except OSError as exc:
        raise CliError(f"cannot read config file: {exc}") from exc
    return values


def _coerce(key: str, value):
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid value for {key}: {value!r}") from exc
    return value


def _resolve(args: argparse.Namespace, keys) -> dict:
    """Merge flag/config/preset/default values for the requested keys."""
    config = _read_config(args.config) if getattr(args, "config", None) else {}
    preset = {}
    preset_name = getattr(args, "preset", None)
    if preset_name:
        if preset_name not in PRESETS:
            raise CliError(f"unknown preset {preset_name!r}")
        preset = PRESETS[preset_name]
    resolved = {}
    for key in keys:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
        elif key in config:
            resolved[key] = _coerce(key, config[key])
        elif key in preset:
            resolved[key] = preset[key]
        else:
            resolved[key] = DEFAULTS[key]
    return resolved


def _parse_genotype(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise CliError(f"malformed genotype {text!r}") from exc


def _read_profile_csv(path: str) -> list[tuple[int, ...]]:
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            rows = [row for row in csv.reader(handle) if row]
    except OSError as exc:
        raise CliError(f"cannot read population file: {exc}") from exc
    if not rows:
        raise CliError("population file is empty")
    profiles = []
    for lineno, row in enumerate(rows, 1):
        try:
            profiles.append(tuple(int(cell) for cell in row))
        except ValueError as exc:
            raise CliError(f"line {lineno}: non-integer score") from exc
    width = len(profiles[0])
    if any(len(p) != width for p in profiles):
        raise CliError("ragged rows: profiles differ in length")
    return profiles


def _epsilon_policy(values: dict) -> EpsilonPolicy:
    return EpsilonPolicy(
        mode=values["epsilon_mode"],
        value=values["epsilon"],
        variant=values.get("variant", "semi-dynamic"),
    )


def _model_params(values: dict) -> model.ModelParams:
    try:
        return model.ModelParams(
            population_size=values["S"],
            dims=values["D"],
            value_limit=values["L"],
            generations=values["G"],
            mutation_rate=values["mu"],
            threshold=values["t"],
            epsilon_policy=_epsilon_policy(values),
            max_steps=values["steps"],
            seed=values["seed"],
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    try:
        return open(path, "w", newline="", encoding="utf-8"), True
    except OSError as exc:
        raise CliError(f"cannot write output file: {exc}") from exc


def cmd_score(args) -> int:
    values = _resolve(args, ["D", "L"])
    genotype = _parse_genotype(args.genotype)
    if len(genotype) != values["D"]:
        raise CliError(f"expected {values['D']} values, got {len(genotype)}")
    try:
        genotype = landscape.validate_genotype(genotype, values["L"])
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    print(",".join(str(s) for s in landscape.evaluate_scores(genotype)))
    return 0


def cmd_mad(args) -> int:
    profiles = _read_profile_csv(args.pool)
    if args.objective is not None:
        pool = SelectionPool.from_profiles(profiles)
        if not 0 <= args.objective < pool.dims:
            raise CliError(f"objective index {args.objective} out of range")
        print(mad_epsilon(pool, args.objective))
    else:
        print(",".join(str(v) for v in mad_vector(profiles)))
    return 0


def cmd_select_trace(args) -> int:
    values = _resolve(args, ["epsilon", "epsilon_mode", "variant", "seed"])
    profiles = _read_profile_csv(args.pool)
    pool = SelectionPool.from_profiles(profiles)
    policy = _epsilon_policy(values)
    rng = np.random.default_rng(values["seed"])
    if args.ordering:
        try:
            ordering = [int(p) for p in args.ordering.split(",")]
        except ValueError as exc:
            raise CliError(f"malformed ordering {args.ordering!r}") from exc
    else:
        ordering = [int(j) for j in rng.permutation(pool.dims)]
    try:
        candidates, steps = filter_cascade(pool, ordering, policy)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    for record in steps:
        print(
            json.dumps(
                {
                    "objective": record.objective,
                    "epsilon": record.epsilon,
                    "best": record.best,
                    "survivors": list(record.survivors),
                },
                sort_keys=True,
            )
        )
    if len(candidates) > 1:
        winner = candidates[int(rng.integers(len(candidates)))]
    else:
        winner = candidates[0]
    print(json.dumps({"selected": winner, "tied": list(candidates)}, sort_keys=True))
    return 0


def cmd_plex(args) -> int:
    values = _resolve(args, ["epsilon", "epsilon_mode"])
    profiles = _read_profile_csv(args.pool)
    if values["epsilon_mode"] == "mad":
        eps = mad_vector(profiles)
    else:
        eps = values["epsilon"]
    table = probability.p_lex_table(profiles, eps)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["profile", "p_lex"])
    for profile in table:
        writer.writerow([",".join(str(s) for s in profile), str(table[profile])])
    return 0


def cmd_survival(args) -> int:
    values = _resolve(args, ["S", "G"])
    if not 0.0 <= args.p <= 1.0:
        raise CliError("p must lie in [0, 1]")
    print(probability.survival_vector(args.p, values["S"], values["G"]))
    return 0


def cmd_feasibility(args) -> int:
    values = _resolve(args, ["S", "G", "t"])
    if not 0.0 < values["t"] < 1.0:
        raise CliError("t must lie strictly in (0, 1)")
    if not args.grid:
        params = probability.SurvivalParams(values["S"], values["G"], values["t"])
        bound = probability.max_feasible_dimension(params)
        print("unbounded" if bound is None else bound)
        return 0
    s_values = probability.log_spaced_ints(args.S_min, args.S_max, args.points)
    g_values = probability.log_spaced_ints(args.G_min, args.G_max, args.points)
    stream, close = _open_out(args.out)
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["S", "G", "max_D"])
        for s, g, bound in probability.feasibility_grid(s_values, g_values, values["t"]):
            writer.writerow([s, g, "unbounded" if bound is None else bound])
    finally:
        if close:
            stream.close()
    return 0


def cmd_run(args) -> int:
    values = _resolve(
        args, ["D", "L", "S", "G", "mu", "t", "epsilon", "epsilon_mode", "steps", "seed"]
    )
    params = _model_params(values)
    collect = args.trajectory is not None
    outcome = model.run(
        params, stop_on_hit=not args.no_early_stop, collect_trajectory=collect
    )
    if collect:
        handle, close = _open_out(args.trajectory)
        try:
            for entry in outcome.trajectory:
                handle.write(
                    json.dumps(
                        {
                            "step": entry["step"],
                            "memberships": [
                                {"genotype": ",".join(str(v) for v in g), "membership": m}
                                for g, m in entry["memberships"]
                            ],
                            "population": [
                                ",".join(str(v) for v in g) for g in entry["population"]
                            ],
                        },
                        sort_keys=True,
                    )
                    + "\n"
                )
        finally:
            if close:
                handle.close()
    print(
        json.dumps(
            {
                "found_optimum": outcome.found_optimum,
                "first_hit_step": outcome.first_hit_step,
                "steps_run": outcome.steps_run,
                "distinct_profiles_discovered": len(outcome.discovered_profiles),
            },
            sort_keys=True,
        )
    )
    return 0


def _parse_grid(text: str, label: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise CliError(f"invalid {label} grid: {text!r}") from exc


def _parse_policies(text: str) -> list[EpsilonPolicy]:
    policies = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if token == "mad":
            policies.append(EpsilonPolicy(mode="mad"))
        else:
            try:
                policies.append(EpsilonPolicy(mode="constant", value=float(token)))
            except ValueError as exc:
                raise CliError(f"invalid epsilon entry {token!r}") from exc
    if not policies:
        raise CliError("epsilon grid is empty")
    return policies


def cmd_sweep(args) -> int:
    values = _resolve(args, ["L", "G", "mu", "t", "steps", "replicates", "seed"])
    s_grid = _parse_grid(args.S_grid, "S")
    d_grid = _parse_grid(args.D_grid, "D")
    if not s_grid or not d_grid:
        raise CliError("sweep grids must be non-empty")
    policies = _parse_policies(args.epsilons)
    base = model.ModelParams(
        population_size=s_grid[0],
        dims=d_grid[0],
        value_limit=values["L"],
        generations=values["G"],
        mutation_rate=values["mu"],
        threshold=values["t"],
        epsilon_policy=policies[0],
        max_steps=values["steps"],
        seed=values["seed"],
    )
    rows = model.sweep(
        base, s_grid, d_grid, policies, values["replicates"], workers=args.jobs
    )
    stream, close = _open_out(args.out)
    try:
        if args.format == "json":
            payload = [dict(zip(model.SWEEP_CSV_HEADER, row.as_csv())) for row in rows]
            stream.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        else:
            model.write_sweep_csv(rows, stream)
    finally:
        if close:
            stream.close()
    return 0


def cmd_reach(args) -> int:
    values = _resolve(
        args, ["D", "L", "S", "G", "t", "epsilon", "epsilon_mode", "budget", "seed"]
    )
    values["mu"] = 0.0  # unused by the threshold abstraction
    values["steps"] = 1
    params = _model_params(values)
    if values["budget"] < 1:
        raise CliError("budget must be at least 1")
    if args.start:
        genotypes = [_parse_genotype(part) for part in args.start.split(";")]
        for g in genotypes:
            if len(g) != params.dims:
                raise CliError(f"start genotype {g} does not have {params.dims} values")
            try:
                landscape.validate_genotype(g, params.value_limit)
            except ValueError as exc:
                raise CliError(str(exc)) from exc
        start = reachability.ReachState.of(genotypes)
    else:
        start = reachability.ReachState.of([(0,) * params.dims])
    graph = reachability.explore(start, params, values["budget"])
    if args.out:
        handle, close = _open_out(args.out)
        try:
            json.dump(reachability.export_graph(graph), handle, indent=2, sort_keys=True)
            handle.write("\n")
        finally:
            if close:
                handle.close()
    print(graph.classification)
    return 0


def _add_common(parser, keys):
    if "D" in keys:
        parser.add_argument("--D", type=int, help="number of objectives")
    if "L" in keys:
        parser.add_argument("--L", type=int, help="genotype value limit")
    if "S" in keys:
        parser.add_argument("--S", type=int, help="selection events per generation")
    if "G" in keys:
        parser.add_argument("--G", type=int, help="generations per epoch")
    if "mu" in keys:
        parser.add_argument("--mu", type=float, help="per-genome mutation probability")
    if "t" in keys:
        parser.add_argument("--t", type=float, help="survival threshold")
    if "epsilon" in keys:
        parser.add_argument("--epsilon", type=float, help="constant epsilon value")
    if "epsilon_mode" in keys:
        parser.add_argument(
            "--epsilon-mode", dest="epsilon_mode", choices=["constant", "mad"],
            help="epsilon source",
        )
    if "variant" in keys:
        parser.add_argument(
            "--variant", choices=["static", "semi-dynamic", "dynamic"],
            help="epsilon-lexicase variant",
        )
    if "steps" in keys:
        parser.add_argument("--steps", type=int, help="model step budget")
    if "replicates" in keys:
        parser.add_argument("--replicates", type=int, help="replicate runs per cell")
    if "seed" in keys:
        parser.add_argument("--seed", type=int, help="master random seed")
    if "budget" in keys:
        parser.add_argument("--budget", type=int, help="reachability node budget")
    parser.add_argument("--config", help="KEY=VALUE config file")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="named parameter preset")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexiscape",
        description="Lexicase selection under maximally contradictory objectives: "
        "probabilities, stochastic modeling, and reachability analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score a genotype on every objective")
    _add_common(p, ["D", "L"])
    p.add_argument("--genotype", required=True, help="comma-separated genotype values")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("mad", help="median-absolute-deviation epsilon of a pool")
    p.add_argument("--pool", required=True, help="CSV file, one profile per row")
    p.add_argument("--objective", type=int, help="single objective index")
    p.set_defaults(func=cmd_mad, config=None, preset=None)

    p = sub.add_parser("select-trace", help="trace one selection event step by step")
    _add_common(p, ["epsilon", "epsilon_mode", "variant", "seed"])
    p.add_argument("--pool", required=True, help="CSV file, one profile per row")
    p.add_argument("--ordering", help="comma-separated objective order (default: random)")
    p.set_defaults(func=cmd_select_trace)

    p = sub.add_parser("plex", help="exact per-profile selection probabilities")
    _add_common(p, ["epsilon", "epsilon_mode"])
    p.add_argument("--pool", required=True, help="CSV file, one profile per row")
    p.set_defaults(func=cmd_plex)

    p = sub.add_parser("survival", help="survival probability for a selection probability")
    _add_common(p, ["S", "G"])
    p.add_argument("--p", type=float, required=True, help="per-event selection probability")
    p.set_defaults(func=cmd_survival)

    p = sub.add_parser("feasibility", help="largest objective count that can survive")
    _add_common(p, ["S", "G", "t"])
    p.add_argument("--grid", action="store_true", help="emit a CSV grid over S and G")
    p.add_argument("--S-min", dest="S_min", type=int, default=10)
    p.add_argument("--S-max", dest="S_max", type=int, default=100_000)
    p.add_argument("--G-min", dest="G_min", type=int, default=10)
    p.add_argument("--G-max", dest="G_max", type=int, default=100_000)
    p.add_argument("--points", type=int, default=40, help="grid points per axis")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("run", help="run the stochastic model once")
    _add_common(p, ["D", "L", "S", "G", "mu", "t", "epsilon", "epsilon_mode", "steps", "seed"])
    p.add_argument("--trajectory", help="write per-step fuzzy memberships as JSON lines")
    p.add_argument(
        "--no-early-stop", action="store_true",
        help="keep running after the first Pareto-optimal hit",
    )
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="failure-probability grid over S, D, and epsilon")
    _add_common(p, ["L", "G", "mu", "t", "steps", "replicates", "seed"])
    p.add_argument("--S-grid", dest="S_grid", required=True, help="comma-separated S values")
    p.add_argument("--D-grid", dest="D_grid", required=True, help="comma-separated D values")
    p.add_argument(
        "--epsilons", default="0",
        help="comma-separated epsilon entries; numbers are constant policies, 'mad' "
        "uses median absolute deviation",
    )
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--jobs", type=int, default=1, help="parallel replicate workers")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reach", help="reachability analysis of Pareto-optimal profiles")
    _add_common(p, ["D", "L", "S", "G", "t", "epsilon", "epsilon_mode", "budget", "seed"])
    p.add_argument("--start", help="semicolon-separated start genotypes (default: all zeros)")
    p.add_argument("--out", help="write the explored graph as JSON")
    p.set_defaults(func=cmd_reach)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
