#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np

from .config import PPOConfig
from .errors import NonFiniteLoss
from .network import PARAM_NAMES, PolicyParams, forward_batch, log_softmax
from .rollout import RolloutBatch, normalize_advantages


def clipped_surrogate(ratio: np.ndarray, advantages: np.ndarray, clip_epsilon: float) -> np.ndarray:
    """Per-sample min(r * A, clamp(r, 1 - eps, 1 + eps) * A)."""
    ratio = np.asarray(ratio, dtype=float)
    advantages = np.asarray(advantages, dtype=float)
    return np.minimum(ratio * advantages, np.clip(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon) * advantages)


def loss_and_grads(
    params: PolicyParams,
    obs: np.ndarray,
    action_indices: np.ndarray,
    old_log_probs: np.ndarray,
    advantages: np.ndarray,
    returns: np.ndarray,
    config: PPOConfig,
) -> Tuple[float, Dict[str, np.ndarray], Dict[str, float]]:
    """
    Total PPO loss on one minibatch with its analytic gradient.

    total = policy_loss + value_coef * value_loss - entropy_coef * entropy, where entropy is the per-sample sum
    over ticker heads averaged over the minibatch.

    :return: (total loss, gradient per parameter name, loss statistics).
    """
    cache = forward_batch(params, obs)
    n = len(cache.x)
    rows = np.arange(n)[:, None]
    cols = np.arange(cache.logits.shape[1])[None, :]

    logp_all = log_softmax(cache.logits)
    probs = np.exp(logp_all)
    logp = logp_all[rows, cols, action_indices].sum(axis=1)
    ratio = np.exp(logp - old_log_probs)
    surr1 = ratio * advantages
    surr2 = np.clip(ratio, 1.0 - config.clip_epsilon, 1.0 + config.clip_epsilon) * advantages
    policy_loss = -float(np.mean(np.minimum(surr1, surr2)))

    head_entropy = -(probs * logp_all).sum(axis=2)
    entropy = float(np.mean(head_entropy.sum(axis=1)))
    value_err = cache.values - returns
    value_loss = float(np.mean(value_err ** 2))
    total = policy_loss + config.value_coef * value_loss - config.entropy_coef * entropy

    # the clipped branch is constant in the parameters
    dlogp = np.where(surr1 <= surr2, -ratio * advantages / n, 0.0)
    onehot = np.zeros_like(probs)
    onehot[rows, cols, action_indices] = 1.0
    dlogits = dlogp[:, None, None] * (onehot - probs)
    dlogits += (config.entropy_coef / n) * probs * (logp_all + head_entropy[:, :, None])
    dlogits = dlogits.reshape(n, -1)
    dvalues = config.value_coef * 2.0 / n * value_err

    grads = {
        "Wpi": cache.h2.T @ dlogits,
        "bpi": dlogits.sum(axis=0),
        "Wv": cache.h2.T @ dvalues[:, None],
        "bv": np.array([dvalues.sum()]),
    }
    da2 = (dlogits @ params.Wpi.T + dvalues[:, None] @ params.Wv.T) * (1.0 - cache.h2 ** 2)
    grads["W2"] = cache.h1.T @ da2
    grads["b2"] = da2.sum(axis=0)
    da1 = (da2 @ params.W2.T) * (1.0 - cache.h1 ** 2)
    grads["W1"] = cache.x.T @ da1
    grads["b1"] = da1.sum(axis=0)

    log_ratio = logp - old_log_probs
    stats = {
        "policy_loss": policy_loss,
        "value_loss": value_loss,
        "entropy": entropy,
        "approx_kl": float(np.mean(ratio - 1.0 - log_ratio)),
        "clip_fraction": float(np.mean(np.abs(ratio - 1.0) > config.clip_epsilon)),
    }
    return total, grads, stats


def global_norm(grads: Dict[str, np.ndarray]) -> float:
    return math.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))


def clip_by_global_norm(grads: Dict[str, np.ndarray], max_norm: float) -> Tuple[Dict[str, np.ndarray], float]:
    norm = global_norm(grads)
    if norm > max_norm:
        scale = max_norm / (norm + 1e-6)
        grads = {name: g * scale for name, g in grads.items()}
    return grads, norm


class AdamOptimizer:
    """
    Adam with bias correction. Moment estimates are keyed by parameter name and live as long as the optimizer.

    :param learning_rate: Step size.
    :param epsilon: Denominator guard.
    """

    def __init__(self, learning_rate: float = 3e-4, epsilon: float = 1e-5, beta1: float = 0.9, beta2: float = 0.999):
        self.learning_rate = learning_rate
        self.epsilon = epsilon
        self.beta1 = beta1
        self.beta2 = beta2
        self.t = 0
        self.m: Dict[str, np.ndarray] = {}
        self.v: Dict[str, np.ndarray] = {}

    def step(self, params: PolicyParams, grads: Dict[str, np.ndarray]) -> PolicyParams:
        self.t += 1
        updated = {}
        for name in PARAM_NAMES:
            g = grads[name]
            m = self.beta1 * self.m.get(name, np.zeros_like(g)) + (1.0 - self.beta1) * g
            v = self.beta2 * self.v.get(name, np.zeros_like(g)) + (1.0 - self.beta2) * g * g
            self.m[name], self.v[name] = m, v
            m_hat = m / (1.0 - self.beta1 ** self.t)
            v_hat = v / (1.0 - self.beta2 ** self.t)
            updated[name] = getattr(params, name) - self.learning_rate * m_hat / (np.sqrt(v_hat) + self.epsilon)
        return PolicyParams(**updated)


def ppo_update(
    params: PolicyParams,
    batch: RolloutBatch,
    config: PPOConfig,
    rng: Optional[np.random.Generator] = None,
    optimizer: Optional[AdamOptimizer] = None,
) -> Tuple[PolicyParams, Dict[str, float]]:
    """
    Run ``epochs_per_update`` passes of shuffled minibatch gradient steps over one rollout.

    Advantages are normalized once per update. A non-finite loss or gradient abandons the update; the caller's
    ``params`` are never modified.

    :param params: Current weights.
    :param batch: Rollout with advantages and returns.
    :param config: Hyperparameters.
    :param rng: Minibatch shuffling stream; a fixed order is used when omitted.
    :param optimizer: Optimizer whose moments carry across updates; a fresh one is made when omitted.
    :return: (updated weights, statistics averaged over minibatch steps).
    """
    if batch.advantages is None or batch.returns is None:
        raise ValueError("ppo_update needs a batch with advantages; call with_advantages first")
    optimizer = optimizer or AdamOptimizer(config.learning_rate, config.adam_epsilon)
    advantages = normalize_advantages(batch.advantages)
    current = params.copy()
    totals: Dict[str, float] = {}
    steps = 0
    n = len(batch)
    for epoch in range(config.epochs_per_update):
        order = rng.permutation(n) if rng is not None else np.arange(n)
        for start in range(0, n, config.minibatch):
            idx = order[start : start + config.minibatch]
            loss, grads, stats = loss_and_grads(
                current,
                batch.observations[idx],
                batch.action_indices[idx],
                batch.log_probs[idx],
                advantages[idx],
                batch.returns[idx],
                config,
            )
            grads, norm = clip_by_global_norm(grads, config.max_grad_norm)
            if not (math.isfinite(loss) and math.isfinite(norm)):
                diagnostics = {"epoch": epoch, "minibatch_start": int(start), "loss": loss, "grad_norm": norm, **stats}
                logging.error(f"Non-finite PPO loss, update abandoned: {diagnostics}")
                raise NonFiniteLoss("PPO loss or gradient is not finite", diagnostics)
            current = optimizer.step(current, grads)
            stats["grad_norm"] = norm
            for key, value in stats.items():
                totals[key] = totals.get(key, 0.0) + value
            steps += 1
    return current, {key: value / steps for key, value in totals.items()}
