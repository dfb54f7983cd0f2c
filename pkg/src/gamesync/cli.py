"""Command-line interface.

Subcommands: ``run`` executes a batch experiment from a config file
and/or flags, ``verify`` machine-checks the synchronization-invariance
verdicts on bundled or user-supplied desk-scale games, ``summarize``
recomputes aggregates from existing per-run CSVs.

Exit codes: 0 success / all verdicts pass, 1 verification failure,
2 usage or configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import fixtures
from .experiment import (
    ExperimentConfig,
    parse_config_file,
    run_experiment,
    summarize,
    verify_theorems,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gamesync",
        description="Asynchronous vs. priority-synchronized learning in constrained potential games",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a batch coverage experiment")
    run.add_argument("--config", help="key=value config file")
    run.add_argument("--map", help="map file path")
    run.add_argument("--agents", type=int, help="number of agents")
    run.add_argument("--epsilon", type=float, help="policy noise parameter")
    run.add_argument("--kappa", type=float, help="inertia parameter")
    run.add_argument("--rounds", type=int, help="horizon per run")
    run.add_argument("--runs", type=int, help="number of paired runs")
    run.add_argument("--seed", type=int, help="base seed")
    run.add_argument("--out", help="output directory")
    run.add_argument("--modes", help="comma list from {async,sync}")
    run.add_argument("--thresholds", help="comma list of objective thresholds")
    run.add_argument("--workers", type=int, default=1, help="parallel run workers")

    verify = sub.add_parser("verify", help="machine-check the chain-invariance verdicts")
    verify.add_argument(
        "--game",
        action="append",
        default=[],
        help="bundled fixture name or .game/.map path (repeatable)",
    )
    verify.add_argument("--all", action="store_true", help="verify every bundled fixture")
    verify.add_argument(
        "--break-coupling",
        action="store_true",
        help="test-only mutation: arbitrate moves ignoring coupling sets",
    )
    verify.add_argument("--epsilon", type=float, default=0.4)
    verify.add_argument("--kappa", type=float, default=0.01)
    verify.add_argument("--out", help="directory for report files (default: stdout only)")

    summ = sub.add_parser("summarize", help="recompute aggregates from per-run CSVs")
    summ.add_argument("--out", required=True, help="directory holding run_<idx>_<mode>.csv")
    summ.add_argument("--thresholds", help="comma list of objective thresholds")
    return parser


def _cmd_run(args) -> int:
    file_values = parse_config_file(args.config) if args.config else None
    overrides = {
        "map": args.map,
        "agents": args.agents,
        "epsilon": args.epsilon,
        "kappa": args.kappa,
        "rounds": args.rounds,
        "runs": args.runs,
        "seed": args.seed,
        "out": args.out,
        "modes": args.modes,
        "thresholds": args.thresholds,
    }
    config = ExperimentConfig.from_sources(file_values, overrides)
    result = run_experiment(config, workers=args.workers)
    sys.stdout.write(result.aggregate.summary_text())
    sys.stdout.write(f"outputs written to {config.out_dir}\n")
    return 0


def _cmd_verify(args) -> int:
    names = list(args.game)
    if args.all or not names:
        names.extend(fixtures.small_game_names())
    status = 0
    for name in names:
        exit_code, report = verify_theorems(
            name,
            broken_coupling=args.break_coupling,
            epsilon=args.epsilon,
            kappa=args.kappa,
        )
        status = max(status, exit_code)
        text = f"=== {name}{' [broken coupling]' if args.break_coupling else ''} ===\n"
        text += report.render_text() + "\n"
        sys.stdout.write(text)
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            safe = os.path.basename(name).replace(os.sep, "_")
            with open(
                os.path.join(args.out, f"verify_{safe}.txt"), "w", encoding="utf-8"
            ) as fh:
                fh.write(text)
    return status


def _cmd_summarize(args) -> int:
    thresholds = (
        tuple(float(x) for x in args.thresholds.split(",")) if args.thresholds else ()
    )
    aggregate = summarize(args.out, thresholds)
    sys.stdout.write(aggregate.summary_text())
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_summarize(args)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except RuntimeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
