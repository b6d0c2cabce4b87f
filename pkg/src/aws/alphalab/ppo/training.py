#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import json
import logging
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from ..common.io import atomic_write_json, write_csv
from ..common.seeding import child_rngs
from ..tradenv.env import EpisodeResult, TradingEnv
from ..tradenv.errors import SharpeUndefined
from ..tradenv.normalizer import ObsNormalizer
from ..tradenv.performance import returns_from_values, sharpe, total_return
from .config import PPOConfig
from .network import PolicyParams, policy_forward
from .rollout import RolloutBatch, sample_actions
from .update import AdamOptimizer, ppo_update

EnvFactory = Callable[[], TradingEnv]
CHECKPOINT_VERSION = 1
CURVE_HEADER = ("timestep", "eval_sharpe", "eval_return")


@dataclass(frozen=True)
class CurvePoint:
    timestep: int
    eval_sharpe: Optional[float]
    eval_return: float


@dataclass
class Checkpoint:
    """Policy weights and normalizer statistics captured at ``timestep``."""

    timestep: int
    params: PolicyParams
    normalizer: ObsNormalizer
    config: PPOConfig
    seed: int

    def to_record(self) -> Dict[str, Any]:
        return {
            "version": CHECKPOINT_VERSION,
            "timestep": self.timestep,
            "seed": self.seed,
            "config": self.config.to_record(),
            "normalizer": self.normalizer.to_record(),
            "params": self.params.to_record(),
        }

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> "Checkpoint":
        if record.get("version") != CHECKPOINT_VERSION:
            raise ValueError(f"Unsupported checkpoint version {record.get('version')}")
        return cls(
            timestep=int(record["timestep"]),
            params=PolicyParams.from_record(record["params"]),
            normalizer=ObsNormalizer.from_record(record["normalizer"]),
            config=PPOConfig.from_dict(record["config"]),
            seed=int(record["seed"]),
        )

    def save(self, directory: Union[str, Path]) -> Path:
        return atomic_write_json(Path(directory) / f"checkpoint_{self.timestep:08d}.json", self.to_record())

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Checkpoint":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_record(json.load(handle))


@dataclass
class TrainingResult:
    checkpoints: List[Checkpoint] = field(default_factory=list)
    curve: List[CurvePoint] = field(default_factory=list)
    update_stats: List[Dict[str, float]] = field(default_factory=list)

    @property
    def final(self) -> Checkpoint:
        return self.checkpoints[-1]

    def write_curve_csv(self, path: Union[str, Path]) -> Path:
        return write_csv(path, CURVE_HEADER, [(p.timestep, p.eval_sharpe, p.eval_return) for p in self.curve])


def run_policy_episode(
    params: PolicyParams,
    norm: ObsNormalizer,
    env: TradingEnv,
    deterministic: bool = True,
    rng: Optional[np.random.Generator] = None,
    seed: int = 0,
) -> EpisodeResult:
    """
    Run one full episode with a fixed policy and a frozen normalizer, recording values, actions and the trace.

    :param params: Policy weights.
    :param norm: Normalizer with updates disabled.
    :param env: Environment to run.
    :param deterministic: Argmax actions; otherwise sample from ``rng``.
    :param rng: Sampling stream for stochastic evaluation.
    :param seed: Reset seed.
    :return: Episode values, actions and trace.
    """
    if norm.update_enabled:
        raise ValueError("Evaluation needs a frozen normalizer; use norm.frozen()")
    state = env.reset(seed)
    values = [state.value]
    actions = []
    trace = []
    while not state.done:
        logits, _ = policy_forward(params, norm.transform(env.build_observation(state)))
        vector, _, _ = sample_actions(logits, rng, deterministic=deterministic)
        state, reward, _, info = env.step(state, vector)
        values.append(info["value"])
        actions.append(tuple(int(a) for a in vector))
        trace.append({**info, "reward": reward})
    return EpisodeResult(values=tuple(values), actions=tuple(actions), trace=tuple(trace), final=state)


def evaluate_policy(
    params: PolicyParams,
    norm: ObsNormalizer,
    env: TradingEnv,
    deterministic: bool = True,
    rng: Optional[np.random.Generator] = None,
) -> List[Tuple[date, float]]:
    """
    :return: Daily portfolio values over one episode, starting with the initial value.
    """
    result = run_policy_episode(params, norm, env, deterministic=deterministic, rng=rng)
    return list(zip(env.dates, result.values))


def _curve_point(timestep: int, equity: List[Tuple[date, float]]) -> CurvePoint:
    values = [v for _, v in equity]
    try:
        eval_sharpe = sharpe(returns_from_values(values))
    except SharpeUndefined:
        eval_sharpe = None
    return CurvePoint(timestep=timestep, eval_sharpe=eval_sharpe, eval_return=total_return(values))


def train(
    env_factory: EnvFactory,
    norm: ObsNormalizer,
    config: PPOConfig,
    seed: int,
    eval_env_factory: Optional[EnvFactory] = None,
    checkpoint_dir: Optional[Union[str, Path]] = None,
) -> TrainingResult:
    """
    Train a policy with PPO. The master seed spawns the weight-init, action-sampling and environment streams;
    minibatch shuffling draws from the action stream's sibling spawned after them.

    Every ``checkpoint_every`` steps the current weights are checkpointed and evaluated with a frozen copy of the
    normalizer and deterministic actions on ``eval_env_factory`` (the training environment when omitted).

    :param env_factory: Builds the training environment.
    :param norm: Normalizer updated during training; it is returned inside each checkpoint as a frozen copy.
    :param config: Hyperparameters.
    :param seed: Master seed.
    :param eval_env_factory: Builds the validation environment.
    :param checkpoint_dir: Directory for checkpoint JSON files and the learning-curve CSV.
    :return: Checkpoints, the learning curve and per-update statistics.
    """
    init_rng, action_rng, env_rng, shuffle_rng = child_rngs(seed, 4)
    env = env_factory()
    eval_env = eval_env_factory() if eval_env_factory is not None else env
    params = PolicyParams.initialize(env.width, env.n_tickers, init_rng, config.hidden_sizes)
    optimizer = AdamOptimizer(config.learning_rate, config.adam_epsilon)
    result = TrainingResult()
    logging.info(f"PPO seed {seed}: width {env.width}, {env.n_tickers} tickers, {params.param_count} parameters")

    def fresh_episode():
        return env.reset(int(env_rng.integers(2 ** 31)))

    state = fresh_episode()
    obs = norm.normalize(env.build_observation(state))
    buffers: Dict[str, list] = {k: [] for k in ("obs", "idx", "logp", "rewards", "values", "dones")}
    for step_count in range(1, config.total_timesteps + 1):
        logits, value = policy_forward(params, obs)
        vector, logp, idx = sample_actions(logits, action_rng)
        state, reward, done, _ = env.step(state, vector)
        for key, item in zip(buffers, (obs, idx, logp, reward, value, done)):
            buffers[key].append(item)
        if done:
            state = fresh_episode()
        obs = norm.normalize(env.build_observation(state))

        if len(buffers["obs"]) == config.rollout_horizon or step_count == config.total_timesteps:
            _, last_value = policy_forward(params, obs)
            batch = RolloutBatch.from_steps(
                buffers["obs"], buffers["idx"], buffers["logp"], buffers["rewards"], buffers["values"], buffers["dones"]
            ).with_advantages(config.gamma, config.gae_lambda, last_value)
            params, stats = ppo_update(params, batch, config, rng=shuffle_rng, optimizer=optimizer)
            stats["timestep"] = float(step_count)
            result.update_stats.append(stats)
            logging.debug(f"Update at {step_count}: {stats}")
            buffers = {k: [] for k in buffers}

        if step_count % config.checkpoint_every == 0 or (step_count == config.total_timesteps and not result.checkpoints):
            frozen = norm.frozen()
            checkpoint = Checkpoint(step_count, params.copy(), frozen, config, seed)
            point = _curve_point(step_count, evaluate_policy(params, frozen, eval_env))
            result.checkpoints.append(checkpoint)
            result.curve.append(point)
            sharpe_text = "undefined" if point.eval_sharpe is None else f"{point.eval_sharpe:.3f}"
            logging.info(f"Checkpoint {step_count}: eval Sharpe {sharpe_text}, return {point.eval_return:+.4f}")
            if checkpoint_dir is not None:
                checkpoint.save(checkpoint_dir)

    if checkpoint_dir is not None:
        result.write_curve_csv(Path(checkpoint_dir) / "learning_curve.csv")
    return result
