"""Per-episode series analytics: rolling averages, the solved criterion, and
cross-run aggregation. Episode indices are 1-based everywhere."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

SOLVED_THRESHOLD = 195.0
SOLVED_WINDOW = 100


@dataclass(frozen=True)
class EpisodeRecord:
    """Outcome of one episode: reward total, the epsilon in force, step count."""

    episode: int
    total_reward: float
    epsilon: float
    steps: int


@dataclass(frozen=True)
class RunResult:
    """One seed's full episode series plus its solved episode, if any."""

    seed: int
    records: tuple[EpisodeRecord, ...]
    solved_at: Optional[int]


@dataclass(frozen=True)
class AggregateCurves:
    """Pointwise means across runs.

    ``mean_rolling`` starts at episode ``window`` (no value is defined for a
    partial window), so its first entry belongs to that episode.
    """

    mean_reward: tuple[float, ...]
    mean_rolling: tuple[float, ...]
    mean_epsilon: tuple[float, ...]
    window: int = SOLVED_WINDOW


def rolling_mean(series: Sequence[float], window: int) -> list[float]:
    """Trailing-window means via prefix sums.

    The first output covers elements 1..window, so the result is
    ``window - 1`` shorter than the input (empty if the input is shorter
    than the window).
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    prefix = [0.0] * (len(series) + 1)
    acc = 0.0
    for i, value in enumerate(series):
        acc += value
        prefix[i + 1] = acc
    return [
        (prefix[i] - prefix[i - window]) / window
        for i in range(window, len(series) + 1)
    ]


def solved_at(
    records: Sequence[EpisodeRecord],
    threshold: float = SOLVED_THRESHOLD,
    window: int = SOLVED_WINDOW,
) -> Optional[int]:
    """First episode whose trailing ``window`` episodes average at or above
    ``threshold``; None if that never happens."""
    rewards = [r.total_reward for r in records]
    for offset, mean in enumerate(rolling_mean(rewards, window)):
        if mean >= threshold:
            return records[window - 1 + offset].episode
    return None


def solve_count(runs: Sequence[RunResult], budget: int = 500) -> int:
    """Number of runs solved within the episode budget."""
    return sum(1 for run in runs if run.solved_at is not None and run.solved_at <= budget)


def aggregate_runs(runs: Sequence[RunResult], window: int = SOLVED_WINDOW) -> AggregateCurves:
    """Average the per-episode reward, rolling mean, and epsilon across runs.

    The rolling mean is computed per run first, then averaged pointwise.
    Cross-run means use exact summation, so the result does not depend on
    run order. All runs must have the same episode count.
    """
    if not runs:
        raise ValueError("aggregate_runs needs at least one run")
    n_episodes = len(runs[0].records)
    for run in runs:
        if len(run.records) != n_episodes:
            raise ValueError(
                f"runs have unequal episode counts: {len(run.records)} != {n_episodes}"
            )
    n_runs = len(runs)
    mean_reward = tuple(
        math.fsum(run.records[i].total_reward for run in runs) / n_runs
        for i in range(n_episodes)
    )
    mean_epsilon = tuple(
        math.fsum(run.records[i].epsilon for run in runs) / n_runs
        for i in range(n_episodes)
    )
    per_run_rolling = [
        rolling_mean([r.total_reward for r in run.records], window) for run in runs
    ]
    n_rolling = len(per_run_rolling[0])
    mean_rolling = tuple(
        math.fsum(rolled[i] for rolled in per_run_rolling) / n_runs
        for i in range(n_rolling)
    )
    return AggregateCurves(
        mean_reward=mean_reward,
        mean_rolling=mean_rolling,
        mean_epsilon=mean_epsilon,
        window=window,
    )
