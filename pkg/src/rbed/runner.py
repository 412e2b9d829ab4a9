"""Experiment orchestration: seeded multi-run execution and comparisons.

Each seed gets a fresh generator, Q-table, environment, and schedule. The
schedule advances exactly once per episode, after the episode ends, so the
epsilon recorded for an episode is the value that was in force during it.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .agent import AgentParams, Discretizer, new_q_table, run_episode
from .config import (
    ConfigError,
    ConstantConfig,
    ExperimentConfig,
    ExponentialConfig,
    RbedConfig,
    SchedulerConfig,
    validate_config,
)
from .envs import TabularCartPole, TabularChain
from .metrics import (
    AggregateCurves,
    RunResult,
    aggregate_runs,
    solve_count,
    solved_at,
)
from .rng import Rng
from .schedules import ConstantSchedule, ExponentialSchedule, RbedSchedule, Schedule

REACH_MARK = 200.0  # episode reward regarded as hitting the ceiling


def build_schedule(config: SchedulerConfig) -> Schedule:
    if isinstance(config, RbedConfig):
        return RbedSchedule.for_target(
            reward_target=config.reward_target,
            epsilon_start=config.epsilon_start,
            epsilon_min=config.epsilon_min,
            reward_increment=config.reward_increment,
            reward_threshold=config.reward_threshold_init,
        )
    if isinstance(config, ExponentialConfig):
        return ExponentialSchedule(
            epsilon=config.epsilon_start,
            decay_rate=config.decay_rate,
            epsilon_min=config.epsilon_min,
        )
    if isinstance(config, ConstantConfig):
        return ConstantSchedule(epsilon=config.epsilon)
    raise ConfigError(f"unknown scheduler config {config!r}")


def build_env(config: ExperimentConfig):
    if config.environment == "chain":
        return TabularChain(config.chain_states)
    return TabularCartPole(Discretizer(config.agent.buckets, config.agent.clips))


def run_single_seed(config: ExperimentConfig, seed: int) -> RunResult:
    """One fully deterministic run: the seed fixes every draw."""
    rng = Rng(seed)
    env = build_env(config)
    q = new_q_table(env.n_states, env.n_actions)
    schedule = build_schedule(config.scheduler)
    params = AgentParams(alpha=config.agent.alpha, gamma=config.agent.gamma)
    records = []
    for episode in range(1, config.episodes + 1):
        record = run_episode(env, q, schedule.epsilon, params, rng, episode=episode)
        schedule = schedule.update(record.total_reward)
        records.append(record)
    records = tuple(records)
    return RunResult(seed=seed, records=records, solved_at=solved_at(records))


def _seed_task(args: tuple[ExperimentConfig, int]) -> RunResult:
    return run_single_seed(*args)


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> list[RunResult]:
    """Run every seed; results follow the config's seed order regardless of
    execution order, so parallel output equals sequential output."""
    validate_config(config)
    if jobs <= 1 or len(config.seeds) == 1:
        return [run_single_seed(config, seed) for seed in config.seeds]
    with ProcessPoolExecutor(max_workers=min(jobs, len(config.seeds))) as pool:
        return list(pool.map(_seed_task, [(config, seed) for seed in config.seeds]))


def first_reaching(records, mark: float = REACH_MARK) -> Optional[int]:
    """Episode of the first reward at or above the mark, if any."""
    for record in records:
        if record.total_reward >= mark:
            return record.episode
    return None


@dataclass(frozen=True)
class ArmReport:
    """Summary of one configuration's runs within a comparison."""

    label: str
    config: ExperimentConfig
    runs: tuple[RunResult, ...]
    solve_budget: int
    solve_count: int
    mean_solve_episode: Optional[float]
    first_200: tuple[Optional[int], ...]
    mean_first_200: Optional[float]
    curves: AggregateCurves


@dataclass(frozen=True)
class ComparisonReport:
    a: ArmReport
    b: ArmReport
    solve_ratio: Optional[float]


def _mean(values: Sequence[float]) -> Optional[float]:
    if not values:
        return None
    return math.fsum(values) / len(values)


def _arm_report(label: str, config: ExperimentConfig, runs: Sequence[RunResult]) -> ArmReport:
    budget = config.episodes
    solved = [run.solved_at for run in runs if run.solved_at is not None and run.solved_at <= budget]
    first_200 = tuple(first_reaching(run.records) for run in runs)
    reached = [episode for episode in first_200 if episode is not None]
    return ArmReport(
        label=label,
        config=config,
        runs=tuple(runs),
        solve_budget=budget,
        solve_count=solve_count(runs, budget=budget),
        mean_solve_episode=_mean(solved),
        first_200=first_200,
        mean_first_200=_mean(reached),
        curves=aggregate_runs(runs),
    )


def compare(
    config_a: ExperimentConfig, config_b: ExperimentConfig, jobs: int = 1
) -> ComparisonReport:
    """Run two configurations over the identical protocol and summarize.

    Only the scheduler and agent may differ; episodes, seeds, and the
    environment must match so the comparison is like for like.
    """
    validate_config(config_a)
    validate_config(config_b)
    if config_a.episodes != config_b.episodes:
        raise ConfigError(
            f"episode counts differ: {config_a.episodes} != {config_b.episodes}"
        )
    if config_a.seeds != config_b.seeds:
        raise ConfigError("seed lists differ between the two configs")
    if config_a.environment != config_b.environment:
        raise ConfigError(
            f"environments differ: {config_a.environment!r} != {config_b.environment!r}"
        )
    kind_a = config_a.scheduler.kind
    kind_b = config_b.scheduler.kind
    label_a = kind_a if kind_a != kind_b else f"a:{kind_a}"
    label_b = kind_b if kind_a != kind_b else f"b:{kind_b}"
    runs_a = run_experiment(config_a, jobs=jobs)
    runs_b = run_experiment(config_b, jobs=jobs)
    arm_a = _arm_report(label_a, config_a, runs_a)
    arm_b = _arm_report(label_b, config_b, runs_b)
    ratio = arm_a.solve_count / arm_b.solve_count if arm_b.solve_count > 0 else None
    return ComparisonReport(a=arm_a, b=arm_b, solve_ratio=ratio)
