"""Command-line entry point for running benchmark experiments.

Subcommands:

    run                one experiment from flags or a JSON config file
    sweep-rates        preset grid over evaluation rates x pool handling
    sweep-suggestions  preset grid over suggestions per cycle
    sweep-cycles       preset grid over recommendation-cycle counts
    compare            all five systems on one objective, budget-matched
    stats              re-aggregate an existing runs.csv to JSON on stdout

Exit status: 0 on success, 1 if any run failed, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .evolution import GaConfig
from .harness import (
    COMPARE_CYCLES,
    COMPARE_POOL_SIZE,
    SYSTEMS,
    ExperimentSpec,
    aggregate_rows,
    default_out_dir,
    read_runs_csv,
    run_compare,
    run_experiment,
)
from .objectives import OBJECTIVE_NAMES

SWEEP_RATES = (1, 2, 4, 8, 16, 32, 64)
SWEEP_SUGGESTIONS = (1, 2, 3, 4, 5, 6, 7, 8)
SWEEP_CYCLES = (10, 25, 50, 75, 100, 150)

# flat config-file keys for the GA engine
_GA_KEYS = {
    "ga_population_size": "population_size",
    "ga_selection_factor": "selection_factor",
    "ga_mutation_prob": "mutation_prob",
    "ga_recombination_prob": "recombination_prob",
    "ga_mutation_scale": "mutation_scale",
    "ga_elitism": "elitism",
}


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--objective", choices=OBJECTIVE_NAMES)
    parser.add_argument("--dimension", type=int, default=None)
    parser.add_argument("--pool-size", type=int, default=None)
    parser.add_argument("--reps", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", type=Path, default=None)
    parser.add_argument("--jobs", type=int, default=None)
    parser.add_argument("--ga-pop", type=int, default=None, help="GA population size")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sagrs", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment from flags or a config file")
    _add_common_flags(run_p)
    run_p.add_argument("--config", type=Path, help="JSON file with flat experiment settings")
    run_p.add_argument("--system", choices=SYSTEMS)
    run_p.add_argument("--rate", type=int, nargs="+", default=None)
    run_p.add_argument("--suggestions", type=int, nargs="+", default=None)
    run_p.add_argument("--cycles", type=int, nargs="+", default=None)
    run_p.add_argument("--pool-handling", choices=("reset", "no_reset"), nargs="+", default=None)
    run_p.add_argument("--window", type=int, default=None, help="surrogate training window")

    for name, helptext in (
        ("sweep-rates", "evaluation rates x pool handling"),
        ("sweep-suggestions", "suggestions per cycle"),
        ("sweep-cycles", "recommendation cycle counts"),
    ):
        sweep_p = sub.add_parser(name, help=f"preset sweep over {helptext}")
        _add_common_flags(sweep_p)
        sweep_p.add_argument("--system", choices=SYSTEMS, default="sagrs-lsm")

    compare_p = sub.add_parser("compare", help="all five systems on one objective")
    _add_common_flags(compare_p)
    compare_p.add_argument("--cycles", type=int, default=COMPARE_CYCLES)

    stats_p = sub.add_parser("stats", help="aggregate an existing runs.csv")
    stats_p.add_argument("csv", type=Path)

    return parser


def _spec_from_run_args(args, parser) -> ExperimentSpec:
    settings: dict = {}
    if args.config is not None:
        with open(args.config) as fh:
            settings.update(json.load(fh))
    ga_kwargs = {field: settings.pop(key) for key, field in _GA_KEYS.items() if key in settings}
    if args.ga_pop is not None:
        ga_kwargs["population_size"] = args.ga_pop

    overrides = {
        "objective": args.objective,
        "system": args.system,
        "dimension": args.dimension,
        "rates": args.rate,
        "suggestions": args.suggestions,
        "cycles": args.cycles,
        "pool_handling": args.pool_handling,
        "pool_size": args.pool_size,
        "repetitions": args.reps,
        "base_seed": args.seed,
        "out_dir": args.out,
        "training_window": args.window,
        "jobs": args.jobs,
    }
    settings.update({k: v for k, v in overrides.items() if v is not None})
    if "objective" not in settings or "system" not in settings:
        parser.error("run needs --objective and --system (or a config file providing them)")
    if ga_kwargs:
        settings["ga"] = GaConfig(**ga_kwargs)
    try:
        return ExperimentSpec(**settings)
    except (TypeError, ValueError) as exc:
        parser.error(str(exc))


def _sweep_spec(args, parser, command: str) -> ExperimentSpec:
    if args.objective is None:
        parser.error(f"{command} needs --objective")
    kwargs = dict(
        objective=args.objective,
        system=args.system,
        dimension=args.dimension or 2,
        pool_size=args.pool_size or 100,
        repetitions=args.reps or 10,
        base_seed=args.seed or 0,
        out_dir=args.out or default_out_dir() / f"{command}_{args.system}_{args.objective}",
        jobs=args.jobs or 1,
    )
    if args.ga_pop is not None:
        kwargs["ga"] = GaConfig(population_size=args.ga_pop)
    if command == "sweep-rates":
        kwargs.update(rates=SWEEP_RATES, pool_handling=("reset", "no_reset"))
    elif command == "sweep-suggestions":
        kwargs.update(suggestions=SWEEP_SUGGESTIONS)
    else:
        kwargs.update(cycles=SWEEP_CYCLES)
    return ExperimentSpec(**kwargs)


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "run":
        result = run_experiment(_spec_from_run_args(args, parser))
    elif args.command in ("sweep-rates", "sweep-suggestions", "sweep-cycles"):
        result = run_experiment(_sweep_spec(args, parser, args.command))
    elif args.command == "compare":
        if args.objective is None:
            parser.error("compare needs --objective")
        comparison = run_compare(
            objective=args.objective,
            dimension=args.dimension or 2,
            repetitions=args.reps or 10,
            base_seed=args.seed or 0,
            out_dir=args.out,
            cycles=args.cycles,
            pool_size=args.pool_size or COMPARE_POOL_SIZE,
            ga=GaConfig(population_size=args.ga_pop) if args.ga_pop else None,
            jobs=args.jobs or 1,
        )
        for system in SYSTEMS:
            rows = comparison.rows_by_system[system]
            fits = [r["best_fitness"] for r in rows if r["best_fitness"] is not None]
            if fits:
                print(f"{system:12s} median best fitness {sorted(fits)[len(fits) // 2]:.6g} "
                      f"over {len(fits)} runs")
        result = comparison.result
    elif args.command == "stats":
        if not args.csv.exists():
            print(f"no such file: {args.csv}", file=sys.stderr)
            return 1
        rows = [r for r in read_runs_csv(args.csv) if r["best_fitness"] is not None]
        json.dump(aggregate_rows(rows), sys.stdout, indent=2, sort_keys=True)
        print()
        return 0
    else:  # pragma: no cover - argparse enforces the choices
        parser.error(f"unknown command {args.command!r}")

    for run_id, message in result.failures:
        print(f"FAILED {run_id}: {message}", file=sys.stderr)
    print(f"wrote {result.out_dir}/runs.csv ({len(result.run_rows)} runs, "
          f"{len(result.failures)} failed)")
    return 0 if result.ok else 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
