#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import LengthMismatch
from .network import log_softmax

ACTION_VALUES = np.array([-1, 0, 1])


def sample_actions(
    logits: np.ndarray, rng: Optional[np.random.Generator] = None, deterministic: bool = False
) -> Tuple[np.ndarray, float, np.ndarray]:
    """
    Draw one action per ticker from the softmax of its three logits.

    Stochastic mode uses one uniform per ticker and inverts the cumulative distribution. Deterministic mode takes
    the argmax, with ties going to the lowest index, and draws nothing from ``rng``.

    :param logits: (T x 3) logits.
    :param rng: Action-sampling stream, required unless deterministic.
    :param deterministic: Take the most probable action.
    :return: (actions in {-1, 0, +1}, joint log-probability, action indices in {0, 1, 2}).
    """
    logp = log_softmax(np.asarray(logits, dtype=float))
    if deterministic:
        indices = np.argmax(logp, axis=1)
    else:
        if rng is None:
            raise ValueError("Stochastic sampling needs an rng")
        cdf = np.cumsum(np.exp(logp), axis=1)
        u = rng.random(len(logp))
        indices = np.minimum((u[:, None] >= cdf).sum(axis=1), logp.shape[1] - 1)
    joint = float(logp[np.arange(len(logp)), indices].sum())
    return ACTION_VALUES[indices], joint, indices


def gae(
    rewards: Sequence[float],
    values: Sequence[float],
    dones: Sequence[bool],
    gamma: float,
    lam: float,
    last_value: float = 0.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Generalized advantage estimation over one rollout.

    :param rewards: Per-step rewards.
    :param values: Value estimates of the states the actions were taken in.
    :param dones: True where the step ended an episode; no bootstrap crosses it.
    :param gamma: Discount.
    :param lam: GAE lambda.
    :param last_value: Value of the state after the final step.
    :return: (advantages, return targets = advantages + values).
    """
    r = np.asarray(rewards, dtype=float)
    v = np.asarray(values, dtype=float)
    d = np.asarray(dones, dtype=float)
    if not len(r) == len(v) == len(d):
        raise LengthMismatch(f"rewards ({len(r)}), values ({len(v)}) and dones ({len(d)}) differ in length")
    advantages = np.zeros(len(r))
    next_value = float(last_value)
    running = 0.0
    for t in range(len(r) - 1, -1, -1):
        live = 1.0 - d[t]
        delta = r[t] + gamma * next_value * live - v[t]
        running = delta + gamma * lam * live * running
        advantages[t] = running
        next_value = v[t]
    return advantages, advantages + v


def normalize_advantages(advantages: np.ndarray, epsilon: float = 1e-8) -> np.ndarray:
    a = np.asarray(advantages, dtype=float)
    if len(a) < 2:
        return a - a.mean() if len(a) else a
    return (a - a.mean()) / (a.std() + epsilon)


@dataclass(frozen=True)
class RolloutBatch:
    """Rollout arrays aligned by step. ``advantages`` and ``returns`` stay None until :meth:`with_advantages`."""

    observations: np.ndarray
    action_indices: np.ndarray
    log_probs: np.ndarray
    rewards: np.ndarray
    values: np.ndarray
    dones: np.ndarray
    advantages: Optional[np.ndarray] = None
    returns: Optional[np.ndarray] = None

    def __post_init__(self):
        n = len(self.observations)
        for name in ("action_indices", "log_probs", "rewards", "values", "dones"):
            if len(getattr(self, name)) != n:
                raise LengthMismatch(f"{name} has {len(getattr(self, name))} steps, observations have {n}")
        for name in ("advantages", "returns"):
            if getattr(self, name) is not None and len(getattr(self, name)) != n:
                raise LengthMismatch(f"{name} has {len(getattr(self, name))} steps, observations have {n}")

    def __len__(self) -> int:
        return len(self.observations)

    @property
    def actions(self) -> np.ndarray:
        return ACTION_VALUES[self.action_indices]

    @classmethod
    def from_steps(cls, observations, action_indices, log_probs, rewards, values, dones) -> "RolloutBatch":
        return cls(
            observations=np.asarray(observations, dtype=float),
            action_indices=np.asarray(action_indices, dtype=int),
            log_probs=np.asarray(log_probs, dtype=float),
            rewards=np.asarray(rewards, dtype=float),
            values=np.asarray(values, dtype=float),
            dones=np.asarray(dones, dtype=bool),
        )

    def with_advantages(self, gamma: float, lam: float, last_value: float = 0.0) -> "RolloutBatch":
        advantages, returns = gae(self.rewards, self.values, self.dones, gamma, lam, last_value)
        return replace(self, advantages=advantages, returns=returns)
