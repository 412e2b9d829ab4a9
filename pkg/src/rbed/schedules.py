"""Exploration-rate schedules behind one uniform update contract.

Every schedule exposes ``epsilon`` (the exploration probability currently in
force) and ``update(last_reward)``, which the harness calls exactly once at
the end of each episode with that episode's total reward. Reward-based decay
reacts to the reward; exponential and constant schedules ignore it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union


@dataclass(frozen=True)
class RbedSchedule:
    """Reward-based epsilon decay.

    Epsilon is lowered by a fixed ``change`` only when the last episode's
    reward met the current threshold, and each decay raises the threshold by
    ``reward_increment``, so the agent has to keep earning its exploitation.
    A reward far above the threshold still triggers exactly one decay.
    """

    epsilon: float
    epsilon_min: float
    reward_threshold: float
    reward_increment: float
    change: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon_min <= self.epsilon <= 1.0:
            raise ValueError(
                "need 0 <= epsilon_min <= epsilon <= 1, got "
                f"epsilon_min={self.epsilon_min}, epsilon={self.epsilon}"
            )
        if self.reward_increment <= 0.0:
            raise ValueError(f"reward_increment must be > 0, got {self.reward_increment}")
        if self.change < 0.0:
            raise ValueError(f"change must be >= 0, got {self.change}")

    @classmethod
    def for_target(
        cls,
        reward_target: float,
        epsilon_start: float = 1.0,
        epsilon_min: float = 0.0,
        reward_increment: float = 1.0,
        reward_threshold: float = 0.0,
    ) -> "RbedSchedule":
        """Derive the decay step from the solve target.

        The step is sized so that epsilon walks from ``epsilon_start`` down to
        ``epsilon_min`` in exactly ``reward_target`` threshold crossings: by
        the time the threshold ladder reaches the target, exploration is over.
        """
        if reward_target <= 0.0:
            raise ValueError(f"reward_target must be > 0, got {reward_target}")
        if not 0.0 <= epsilon_min <= epsilon_start <= 1.0:
            raise ValueError(
                "need 0 <= epsilon_min <= epsilon_start <= 1, got "
                f"epsilon_min={epsilon_min}, epsilon_start={epsilon_start}"
            )
        return cls(
            epsilon=epsilon_start,
            epsilon_min=epsilon_min,
            reward_threshold=reward_threshold,
            reward_increment=reward_increment,
            change=(epsilon_start - epsilon_min) / reward_target,
        )

    def update(self, last_reward: float) -> "RbedSchedule":
        if last_reward < self.reward_threshold:
            return self
        eps = self.epsilon - self.change
        if eps < self.epsilon_min:
            eps = self.epsilon_min
        return replace(
            self,
            epsilon=eps,
            reward_threshold=self.reward_threshold + self.reward_increment,
        )


@dataclass(frozen=True)
class ExponentialSchedule:
    """Multiply epsilon by a fixed rate below 1 every episode, floored at
    ``epsilon_min`` regardless of how the agent performed."""

    epsilon: float
    decay_rate: float
    epsilon_min: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.decay_rate < 1.0:
            raise ValueError(f"decay_rate must be in (0, 1), got {self.decay_rate}")
        if not 0.0 <= self.epsilon_min <= self.epsilon <= 1.0:
            raise ValueError(
                "need 0 <= epsilon_min <= epsilon <= 1, got "
                f"epsilon_min={self.epsilon_min}, epsilon={self.epsilon}"
            )

    def update(self, last_reward: float) -> "ExponentialSchedule":
        eps = self.epsilon * self.decay_rate
        if eps < self.epsilon_min:
            eps = self.epsilon_min
        return replace(self, epsilon=eps)


@dataclass(frozen=True)
class ConstantSchedule:
    """Fixed exploration rate; updates are identity."""

    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must be in [0, 1], got {self.epsilon}")

    def update(self, last_reward: float) -> "ConstantSchedule":
        return self


Schedule = Union[RbedSchedule, ExponentialSchedule, ConstantSchedule]
