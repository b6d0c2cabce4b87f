#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass
from typing import Any, Dict, Mapping, Sequence, Tuple

import numpy as np

from ..tradenv.errors import WidthMismatch

N_ACTIONS = 3
PARAM_NAMES = ("W1", "b1", "W2", "b2", "Wpi", "bpi", "Wv", "bv")


def orthogonal(shape: Tuple[int, int], gain: float, rng: np.random.Generator) -> np.ndarray:
    rows, cols = shape
    a = rng.standard_normal((max(rows, cols), min(rows, cols)))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    if rows < cols:
        q = q.T
    return gain * q[:rows, :cols]


@dataclass
class PolicyParams:
    """
    Actor-critic weights: a two-layer tanh trunk shared by T independent 3-way action heads (one block of
    ``Wpi`` per ticker) and a scalar value head.
    """

    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    Wpi: np.ndarray
    bpi: np.ndarray
    Wv: np.ndarray
    bv: np.ndarray

    @property
    def obs_width(self) -> int:
        return self.W1.shape[0]

    @property
    def n_tickers(self) -> int:
        return self.Wpi.shape[1] // N_ACTIONS

    @classmethod
    def initialize(
        cls, obs_width: int, n_tickers: int, rng: np.random.Generator, hidden_sizes: Sequence[int] = (64, 64)
    ) -> "PolicyParams":
        """Orthogonal initialization: gain sqrt(2) on the trunk, 0.01 on the action heads, 1 on the value head."""
        h1, h2 = hidden_sizes
        return cls(
            W1=orthogonal((obs_width, h1), np.sqrt(2.0), rng),
            b1=np.zeros(h1),
            W2=orthogonal((h1, h2), np.sqrt(2.0), rng),
            b2=np.zeros(h2),
            Wpi=orthogonal((h2, N_ACTIONS * n_tickers), 0.01, rng),
            bpi=np.zeros(N_ACTIONS * n_tickers),
            Wv=orthogonal((h2, 1), 1.0, rng),
            bv=np.zeros(1),
        )

    @classmethod
    def zeros(cls, obs_width: int, n_tickers: int, hidden_sizes: Sequence[int] = (64, 64)) -> "PolicyParams":
        h1, h2 = hidden_sizes
        return cls(
            W1=np.zeros((obs_width, h1)),
            b1=np.zeros(h1),
            W2=np.zeros((h1, h2)),
            b2=np.zeros(h2),
            Wpi=np.zeros((h2, N_ACTIONS * n_tickers)),
            bpi=np.zeros(N_ACTIONS * n_tickers),
            Wv=np.zeros((h2, 1)),
            bv=np.zeros(1),
        )

    def arrays(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def copy(self) -> "PolicyParams":
        return PolicyParams(**{name: array.copy() for name, array in self.arrays().items()})

    @property
    def param_count(self) -> int:
        return sum(array.size for array in self.arrays().values())

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(array)) for array in self.arrays().values())

    def to_record(self) -> Dict[str, Any]:
        return {name: array.tolist() for name, array in self.arrays().items()}

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "PolicyParams":
        return cls(**{name: np.array(record[name], dtype=float) for name in PARAM_NAMES})


@dataclass
class ForwardCache:
    x: np.ndarray
    h1: np.ndarray
    h2: np.ndarray
    logits: np.ndarray
    values: np.ndarray


def forward_batch(params: PolicyParams, obs: np.ndarray) -> ForwardCache:
    """
    Forward pass for a batch of observations.

    :param params: Network weights.
    :param obs: (N x width) observations.
    :return: Activations, (N x T x 3) logits and (N,) values.
    """
    x = np.atleast_2d(np.asarray(obs, dtype=float))
    if x.shape[1] != params.obs_width:
        raise WidthMismatch(f"Observation width {x.shape[1]} does not match policy width {params.obs_width}")
    h1 = np.tanh(x @ params.W1 + params.b1)
    h2 = np.tanh(h1 @ params.W2 + params.b2)
    logits = (h2 @ params.Wpi + params.bpi).reshape(len(x), params.n_tickers, N_ACTIONS)
    values = (h2 @ params.Wv + params.bv)[:, 0]
    return ForwardCache(x=x, h1=h1, h2=h2, logits=logits, values=values)


def policy_forward(params: PolicyParams, obs: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    :param params: Network weights.
    :param obs: One observation vector.
    :return: (T x 3) logits and the state value.
    """
    obs = np.asarray(obs, dtype=float)
    if obs.ndim != 1:
        raise WidthMismatch("policy_forward expects a single observation vector")
    cache = forward_batch(params, obs[None, :])
    return cache.logits[0], float(cache.values[0])


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    return shifted - np.log(np.sum(np.exp(shifted), axis=-1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    return np.exp(log_softmax(logits))
