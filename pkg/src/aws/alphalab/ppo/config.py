#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Mapping, Tuple

from ..common.errors import ConfigError

LONG_SCALE_TIMESTEPS = 500_000
LONG_SCALE_CHECKPOINT = 100_000


@dataclass
class PPOConfig:
    """
    PPO hyperparameters (``[ppo]`` section). Defaults are desk scale; :meth:`long_scale` gives the long run.
    """

    total_timesteps: int = 50_000
    rollout_horizon: int = 2048
    minibatch: int = 64
    epochs_per_update: int = 10
    gamma: float = 0.99
    gae_lambda: float = 0.95
    clip_epsilon: float = 0.2
    value_coef: float = 0.5
    entropy_coef: float = 0.01
    learning_rate: float = 3e-4
    max_grad_norm: float = 0.5
    checkpoint_every: int = 10_000
    hidden_sizes: Tuple[int, int] = (64, 64)
    adam_epsilon: float = 1e-5

    def __post_init__(self):
        self.hidden_sizes = tuple(int(h) for h in self.hidden_sizes)
        if not 0.0 < self.gamma <= 1.0:
            raise ConfigError("ppo.gamma must lie in (0, 1]")
        if not 0.0 <= self.gae_lambda <= 1.0:
            raise ConfigError("ppo.gae_lambda must lie in [0, 1]")
        if not self.clip_epsilon > 0:
            raise ConfigError("ppo.clip_epsilon must be positive")
        for name in ("total_timesteps", "rollout_horizon", "minibatch", "epochs_per_update", "checkpoint_every"):
            if getattr(self, name) < 1:
                raise ConfigError(f"ppo.{name} must be at least 1")
        if len(self.hidden_sizes) != 2 or min(self.hidden_sizes) < 1:
            raise ConfigError("ppo.hidden_sizes must hold two positive widths")
        if self.learning_rate <= 0 or self.max_grad_norm <= 0:
            raise ConfigError("ppo.learning_rate and ppo.max_grad_norm must be positive")

    @classmethod
    def long_scale(cls, **overrides) -> "PPOConfig":
        values = {"total_timesteps": LONG_SCALE_TIMESTEPS, "checkpoint_every": LONG_SCALE_CHECKPOINT}
        values.update(overrides)
        return cls(**values)

    def to_record(self) -> Dict[str, Any]:
        record = asdict(self)
        record["hidden_sizes"] = list(self.hidden_sizes)
        return record

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "PPOConfig":
        unknown = set(values) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigError(f"Unknown [ppo] keys: {sorted(unknown)}")
        return cls(**values)
