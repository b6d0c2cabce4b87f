#  Copyright 2024 Amazon.com, Inc. or its affiliates.

# flake8: noqa
from .config import PPOConfig
from .errors import LengthMismatch, NonFiniteLoss
from .network import N_ACTIONS, PolicyParams, forward_batch, log_softmax, policy_forward, softmax
from .rollout import ACTION_VALUES, RolloutBatch, gae, normalize_advantages, sample_actions
from .training import (
    Checkpoint,
    CurvePoint,
    TrainingResult,
    evaluate_policy,
    run_policy_episode,
    train,
)
from .update import AdamOptimizer, clip_by_global_norm, clipped_surrogate, loss_and_grads, ppo_update
