#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import copy
from typing import Any, Dict, Mapping

import numpy as np

from .errors import WidthMismatch


class ObsNormalizer:
    """
    Running per-dimension mean/variance (Welford) with clipping of the z-scored output. The statistics are owned by
    the caller; set ``update_enabled`` to False (or use :meth:`frozen`) for evaluation.

    :param width: Observation width.
    :param clip: Output bound.
    :param epsilon: Variance floor inside the square root.
    """

    def __init__(self, width: int, clip: float = 10.0, epsilon: float = 1e-8, update_enabled: bool = True):
        self.width = width
        self.clip = clip
        self.epsilon = epsilon
        self.update_enabled = update_enabled
        self.count = 0
        self.mean = np.zeros(width)
        self._m2 = np.zeros(width)

    @property
    def var(self) -> np.ndarray:
        if self.count == 0:
            return np.ones(self.width)
        return self._m2 / self.count

    def update(self, obs: np.ndarray) -> None:
        self.count += 1
        delta = obs - self.mean
        self.mean = self.mean + delta / self.count
        self._m2 = self._m2 + delta * (obs - self.mean)

    def _checked(self, obs: np.ndarray) -> np.ndarray:
        obs = np.asarray(obs, dtype=float)
        if obs.shape != (self.width,):
            raise WidthMismatch(f"Observation width {obs.shape} does not match normalizer width {self.width}")
        return obs

    def transform(self, obs: np.ndarray) -> np.ndarray:
        """Clipped z-score under the current statistics, never updating them."""
        obs = self._checked(obs)
        return np.clip((obs - self.mean) / np.sqrt(self.var + self.epsilon), -self.clip, self.clip)

    def normalize(self, obs: np.ndarray) -> np.ndarray:
        """
        Fold ``obs`` into the statistics when updates are enabled, then return the clipped z-score.

        :param obs: Observation vector.
        :return: Normalized vector within [-clip, clip].
        """
        obs = self._checked(obs)
        if self.update_enabled:
            self.update(obs)
        return self.transform(obs)

    def frozen(self) -> "ObsNormalizer":
        """Copy of this normalizer with updates disabled."""
        clone = copy.deepcopy(self)
        clone.update_enabled = False
        return clone

    def to_record(self) -> Dict[str, Any]:
        return {
            "width": self.width,
            "clip": self.clip,
            "epsilon": self.epsilon,
            "count": self.count,
            "mean": self.mean.tolist(),
            "m2": self._m2.tolist(),
        }

    @classmethod
    def from_record(cls, record: Mapping[str, Any], update_enabled: bool = False) -> "ObsNormalizer":
        norm = cls(int(record["width"]), float(record["clip"]), float(record["epsilon"]), update_enabled)
        norm.count = int(record["count"])
        norm.mean = np.array(record["mean"], dtype=float)
        norm._m2 = np.array(record["m2"], dtype=float)
        return norm


def normalize_obs(norm: ObsNormalizer, obs: np.ndarray) -> np.ndarray:
    return norm.normalize(obs)
