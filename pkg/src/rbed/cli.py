"""Command-line interface: run experiments, compare schedules, plot results."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from .config import (
    ConfigError,
    ExperimentConfig,
    config_from_dict,
    load_config,
    parse_seed_spec,
    validate_config,
)
from .emit import emit_compare, emit_results, figures_from_dir
from .runner import ArmReport, compare, run_experiment


def _load(path: Optional[str]) -> ExperimentConfig:
    if path is None:
        return config_from_dict({})
    return load_config(path)


def _apply_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    if args.seeds is not None:
        config = replace(config, seeds=parse_seed_spec(args.seeds))
    if args.episodes is not None:
        config = replace(config, episodes=args.episodes)
    validate_config(config)
    return config


def _summarize_arm(arm: ArmReport) -> str:
    mean_solve = f"{arm.mean_solve_episode:.1f}" if arm.mean_solve_episode is not None else "-"
    mean_200 = f"{arm.mean_first_200:.1f}" if arm.mean_first_200 is not None else "-"
    return (
        f"{arm.label}: solved {arm.solve_count}/{len(arm.runs)} within {arm.solve_budget} episodes"
        f" (mean solve episode {mean_solve}, mean first-200 episode {mean_200})"
    )


def cmd_run(args: argparse.Namespace) -> int:
    config = _apply_overrides(_load(args.config), args)
    results = run_experiment(config, jobs=args.jobs)
    written = emit_results(results, args.out)
    solved = sum(1 for r in results if r.solved_at is not None)
    print(f"ran {len(results)} seed(s) x {config.episodes} episodes ({config.scheduler.kind})")
    print(f"solved {solved}/{len(results)}; wrote {len(written)} file(s) to {args.out}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    config_a = _apply_overrides(_load(args.config_a), args)
    config_b = _apply_overrides(_load(args.config_b), args)
    report = compare(config_a, config_b, jobs=args.jobs)
    emit_compare(report, args.out)
    print(_summarize_arm(report.a))
    print(_summarize_arm(report.b))
    ratio = f"{report.solve_ratio:.3f}" if report.solve_ratio is not None else "n/a (zero solves in b)"
    print(f"solve-count ratio a/b: {ratio}")
    print(f"wrote CSVs and report.json to {args.out}")
    return 0


def cmd_plot(args: argparse.Namespace) -> int:
    written = figures_from_dir(args.in_dir, args.out)
    for path in written:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbed",
        description="Benchmark reward-based epsilon decay against exponential decay.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_protocol_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seeds", help="override seeds, e.g. '1..20' or '3,5,9'")
        p.add_argument("--episodes", type=int, help="override episode count")
        p.add_argument(
            "--jobs",
            type=int,
            default=os.cpu_count() or 1,
            help="worker processes across seeds (default: all cores)",
        )

    run_p = sub.add_parser("run", help="run one experiment config")
    run_p.add_argument("--config", help="JSON config file (defaults apply if omitted)")
    run_p.add_argument("--out", required=True, help="output directory for CSVs")
    add_protocol_flags(run_p)
    run_p.set_defaults(func=cmd_run)

    cmp_p = sub.add_parser("compare", help="run two configs over the same protocol")
    cmp_p.add_argument("--config-a", required=True, help="JSON config for arm a")
    cmp_p.add_argument("--config-b", required=True, help="JSON config for arm b")
    cmp_p.add_argument("--out", required=True, help="output directory")
    add_protocol_flags(cmp_p)
    cmp_p.set_defaults(func=cmd_compare)

    plot_p = sub.add_parser("plot", help="render SVG charts from emitted CSVs")
    plot_p.add_argument("--in", dest="in_dir", required=True, help="directory with CSVs")
    plot_p.add_argument("--out", required=True, help="output directory for SVGs")
    plot_p.set_defaults(func=cmd_plot)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
