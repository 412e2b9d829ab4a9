"""CSV, JSON, and SVG emission for run and comparison outputs.

Emitters are deterministic: identical inputs produce byte-identical files.
Floats are written in shortest round-trip decimal form; lines end with LF.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Sequence

from .config import config_to_dict
from .metrics import AggregateCurves, RunResult, aggregate_runs
from .runner import ArmReport, ComparisonReport
from .svgchart import Series, line_chart

RUN_HEADER = "episode,reward,epsilon,steps"
AGGREGATE_HEADER = "episode,mean_reward,mean_rolling100,mean_epsilon"

FIGURE_NAMES = ("reward.svg", "rolling.svg", "epsilon.svg")


def _fmt(value: float) -> str:
    return repr(float(value))


def emit_run_csv(run: RunResult, path: Path) -> None:
    lines = [RUN_HEADER]
    for r in run.records:
        lines.append(f"{r.episode},{_fmt(r.total_reward)},{_fmt(r.epsilon)},{r.steps}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def emit_aggregate_csv(curves: AggregateCurves, path: Path) -> None:
    lines = [AGGREGATE_HEADER]
    for i, (reward, epsilon) in enumerate(zip(curves.mean_reward, curves.mean_epsilon)):
        episode = i + 1
        if episode >= curves.window:
            rolling = _fmt(curves.mean_rolling[episode - curves.window])
        else:
            rolling = ""
        lines.append(f"{episode},{_fmt(reward)},{rolling},{_fmt(epsilon)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def emit_results(results: Sequence[RunResult], out_dir: str | Path) -> list[Path]:
    """Write one CSV per run plus the aggregate CSV; returns written paths."""
    if not results:
        raise ValueError("emit_results needs at least one run")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for run in results:
        path = out / f"run_{run.seed}.csv"
        emit_run_csv(run, path)
        written.append(path)
    aggregate_path = out / "aggregate.csv"
    emit_aggregate_csv(aggregate_runs(results), aggregate_path)
    written.append(aggregate_path)
    return written


def _arm_to_dict(arm: ArmReport) -> dict:
    return {
        "label": arm.label,
        "scheduler_kind": arm.config.scheduler.kind,
        "config": config_to_dict(arm.config),
        "solve_budget": arm.solve_budget,
        "solve_count": arm.solve_count,
        "solved_at": [run.solved_at for run in arm.runs],
        "mean_solve_episode": arm.mean_solve_episode,
        "first_episode_reaching_200": list(arm.first_200),
        "mean_first_episode_reaching_200": arm.mean_first_200,
    }


def report_to_dict(report: ComparisonReport) -> dict:
    return {
        "a": _arm_to_dict(report.a),
        "b": _arm_to_dict(report.b),
        "solve_ratio": report.solve_ratio,
    }


def emit_compare(report: ComparisonReport, out_dir: str | Path) -> list[Path]:
    """Write both arms' CSVs under a/ and b/ plus report.json."""
    out = Path(out_dir)
    written = emit_results(report.a.runs, out / "a")
    written += emit_results(report.b.runs, out / "b")
    report_path = out / "report.json"
    report_path.write_text(
        json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
        newline="\n",
    )
    written.append(report_path)
    return written


def _reward_series(label: str, curves: AggregateCurves) -> Series:
    xs = list(range(1, len(curves.mean_reward) + 1))
    return Series(label=label, xs=xs, ys=list(curves.mean_reward))


def _rolling_series(label: str, curves: AggregateCurves) -> Optional[Series]:
    if not curves.mean_rolling:
        return None
    xs = list(range(curves.window, curves.window + len(curves.mean_rolling)))
    return Series(label=label, xs=xs, ys=list(curves.mean_rolling))


def _epsilon_series(label: str, curves: AggregateCurves) -> Series:
    xs = list(range(1, len(curves.mean_epsilon) + 1))
    return Series(label=label, xs=xs, ys=list(curves.mean_epsilon))


def render_figures(
    labeled_curves: Sequence[tuple[str, AggregateCurves]],
    solved_threshold: float = 195.0,
) -> dict[str, str]:
    """Build the three benchmark charts as SVG strings keyed by filename."""
    if not labeled_curves:
        raise ValueError("render_figures needs at least one curve set")
    reward = line_chart(
        title="Mean episode reward",
        x_label="episode",
        y_label="reward",
        series=[_reward_series(label, c) for label, c in labeled_curves],
        y_min=0.0,
    )
    rolling_series = [
        s for s in (_rolling_series(label, c) for label, c in labeled_curves) if s is not None
    ]
    window = labeled_curves[0][1].window
    if rolling_series:
        rolling = line_chart(
            title=f"Rolling mean reward (window {window})",
            x_label="episode",
            y_label=f"mean reward, last {window} episodes",
            series=rolling_series,
            y_min=0.0,
            ref_y=solved_threshold,
            ref_label=f"solved ({solved_threshold:g})",
        )
    else:
        # Too few episodes for a full window; chart just the reference level.
        rolling = line_chart(
            title=f"Rolling mean reward (window {window})",
            x_label="episode",
            y_label=f"mean reward, last {window} episodes",
            series=[Series(label="(no full window)", xs=[1.0], ys=[0.0])],
            y_min=0.0,
            ref_y=solved_threshold,
            ref_label=f"solved ({solved_threshold:g})",
        )
    epsilon = line_chart(
        title="Exploration rate by episode",
        x_label="episode",
        y_label="epsilon",
        series=[_epsilon_series(label, c) for label, c in labeled_curves],
        y_min=0.0,
        y_max=1.0,
    )
    return {"reward.svg": reward, "rolling.svg": rolling, "epsilon.svg": epsilon}


def emit_figures(report: ComparisonReport, out_dir: str | Path) -> list[Path]:
    """Write the three comparison charts for a compare report."""
    figures = render_figures(
        [(report.a.label, report.a.curves), (report.b.label, report.b.curves)]
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, svg in figures.items():
        path = out / name
        path.write_text(svg, encoding="utf-8", newline="\n")
        written.append(path)
    return written


def read_aggregate_csv(path: Path) -> AggregateCurves:
    """Parse an aggregate CSV back into curves (for the plot command)."""
    text = path.read_text(encoding="utf-8")
    lines = [line for line in text.split("\n") if line]
    if not lines or lines[0] != AGGREGATE_HEADER:
        raise ValueError(f"{path} is not an aggregate CSV (bad header)")
    mean_reward: list[float] = []
    mean_rolling: list[float] = []
    mean_epsilon: list[float] = []
    window: Optional[int] = None
    for line in lines[1:]:
        fields = line.split(",")
        if len(fields) != 4:
            raise ValueError(f"{path}: malformed row {line!r}")
        episode = int(fields[0])
        mean_reward.append(float(fields[1]))
        if fields[2]:
            if window is None:
                window = episode
            mean_rolling.append(float(fields[2]))
        mean_epsilon.append(float(fields[3]))
    return AggregateCurves(
        mean_reward=tuple(mean_reward),
        mean_rolling=tuple(mean_rolling),
        mean_epsilon=tuple(mean_epsilon),
        window=window if window is not None else 100,
    )


def figures_from_dir(in_dir: str | Path, out_dir: str | Path) -> list[Path]:
    """Rebuild the three charts from emitted CSVs.

    Accepts either a compare layout (report.json with a/ and b/ subdirs) or a
    single run layout (aggregate.csv at the top level).
    """
    src = Path(in_dir)
    report_path = src / "report.json"
    if report_path.is_file():
        meta = json.loads(report_path.read_text(encoding="utf-8"))
        labeled = [
            (meta[arm]["label"], read_aggregate_csv(src / arm / "aggregate.csv"))
            for arm in ("a", "b")
        ]
    elif (src / "aggregate.csv").is_file():
        labeled = [(src.name, read_aggregate_csv(src / "aggregate.csv"))]
    else:
        raise ValueError(f"{src} contains neither report.json nor aggregate.csv")
    figures = render_figures(labeled)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, svg in figures.items():
        path = out / name
        path.write_text(svg, encoding="utf-8", newline="\n")
        written.append(path)
    return written
