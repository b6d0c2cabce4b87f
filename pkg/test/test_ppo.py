#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import csv
from dataclasses import replace

import numpy as np
import pytest
from conftest import make_market

from aws.alphalab.common import ConfigError
from aws.alphalab.synthmarket import SynthConfig, generate_market
from aws.alphalab.tradenv import EnvConfig, ObsNormalizer, TradingEnv, WidthMismatch
from aws.alphalab.ppo import (
    AdamOptimizer,
    Checkpoint,
    LengthMismatch,
    NonFiniteLoss,
    PolicyParams,
    PPOConfig,
    RolloutBatch,
    clip_by_global_norm,
    clipped_surrogate,
    evaluate_policy,
    forward_batch,
    gae,
    log_softmax,
    loss_and_grads,
    policy_forward,
    ppo_update,
    run_policy_episode,
    sample_actions,
    softmax,
    train,
)

WIDTH, N_TICKERS, HIDDEN = 6, 2, (3, 3)


def _random_params(seed=0):
    rng = np.random.default_rng(seed)
    params = PolicyParams.initialize(WIDTH, N_TICKERS, rng, HIDDEN)
    return PolicyParams(**{name: a + rng.normal(0, 0.5, size=a.shape) for name, a in params.arrays().items()})


def _minibatch(params, seed=1, n=8):
    rng = np.random.default_rng(seed)
    obs = rng.normal(size=(n, WIDTH))
    action_indices = rng.integers(0, 3, size=(n, N_TICKERS))
    logp_all = log_softmax(forward_batch(params, obs).logits)
    old_log_probs = logp_all[np.arange(n)[:, None], np.arange(N_TICKERS)[None, :], action_indices].sum(axis=1)
    advantages = rng.normal(size=n)
    returns = rng.normal(size=n)
    return obs, action_indices, old_log_probs, advantages, returns


def test_loss_gradient_matches_finite_differences():
    """
    Test Case: The analytic PPO gradient agrees with central finite differences for every parameter
    """
    params = _random_params()
    batch = _minibatch(params)
    config = PPOConfig(hidden_sizes=HIDDEN, entropy_coef=0.05)
    _, grads, _ = loss_and_grads(params, *batch, config)
    eps = 1e-6

    for name, array in params.arrays().items():
        numeric = np.zeros_like(array)
        for index in np.ndindex(array.shape):
            plus, minus = params.copy(), params.copy()
            getattr(plus, name)[index] += eps
            getattr(minus, name)[index] -= eps
            loss_plus = loss_and_grads(plus, *batch, config)[0]
            loss_minus = loss_and_grads(minus, *batch, config)[0]
            numeric[index] = (loss_plus - loss_minus) / (2 * eps)
        np.testing.assert_allclose(grads[name], numeric, rtol=1e-4, atol=1e-6, err_msg=name)


def test_clipped_surrogate_examples():
    """
    Test Case: A ratio of 1.5 with positive advantage is capped at 1.2 and a ratio of 0.5 with negative advantage
    gives -0.8
    """
    np.testing.assert_allclose(clipped_surrogate([1.5, 0.5, 1.0], [1.0, -1.0, 2.0], 0.2), [1.2, -0.8, 2.0])


def test_gae_examples():
    """
    Test Case: GAE matches hand computation and never bootstraps across an episode end
    """
    advantages, returns = gae([1.0], [0.0], [True], 0.99, 0.95, last_value=100.0)
    two_step, _ = gae([1.0, 1.0], [0.0, 0.0], [False, True], 0.99, 0.95, last_value=5.0)
    open_ended, _ = gae([0.0], [0.0], [False], 0.5, 1.0, last_value=2.0)

    assert advantages[0] == 1.0 and returns[0] == 1.0
    np.testing.assert_allclose(two_step, [1.9405, 1.0])
    assert open_ended[0] == 1.0
    with pytest.raises(LengthMismatch):
        gae([1.0, 2.0], [0.0], [False, False], 0.99, 0.95)


def test_rollout_batch_alignment():
    """
    Test Case: A rollout with misaligned arrays is rejected and advantages attach per step
    """
    with pytest.raises(LengthMismatch):
        RolloutBatch.from_steps(np.zeros((3, 2)), np.zeros((2, 1)), [0, 0, 0], [0, 0, 0], [0, 0, 0], [0, 0, 0])

    batch = RolloutBatch.from_steps(np.zeros((2, 2)), [[0], [2]], [0.0, 0.0], [1.0, 1.0], [0.0, 0.0], [False, True])
    ready = batch.with_advantages(0.99, 0.95)

    assert batch.advantages is None
    assert len(ready.advantages) == 2
    np.testing.assert_array_equal(ready.actions, [[-1], [1]])


def test_sample_actions_modes():
    """
    Test Case: Deterministic sampling takes the argmax with low-index ties and draws nothing; stochastic sampling
    needs an rng and follows the softmax
    """
    rng = np.random.default_rng(3)
    actions, joint, indices = sample_actions(np.array([[0.0, 0.0, 0.0], [0.0, 1.0, 5.0]]), rng, deterministic=True)

    np.testing.assert_array_equal(actions, [-1, 1])
    np.testing.assert_array_equal(indices, [0, 2])
    assert joint == pytest.approx(np.log(1 / 3) + log_softmax(np.array([0.0, 1.0, 5.0]))[2])
    assert rng.random() == np.random.default_rng(3).random()
    with pytest.raises(ValueError):
        sample_actions(np.zeros((1, 3)))

    probs = np.array([0.2, 0.3, 0.5])
    draws = np.array([sample_actions(np.log(probs)[None, :], rng)[2][0] for _ in range(20_000)])
    np.testing.assert_allclose(np.bincount(draws, minlength=3) / len(draws), probs, atol=0.02)


def test_policy_forward_shapes():
    """
    Test Case: The policy returns T x 3 logits and a scalar value, and rejects a wrong width or a batch
    """
    params = _random_params()

    logits, value = policy_forward(params, np.ones(WIDTH))

    assert logits.shape == (N_TICKERS, 3)
    assert isinstance(value, float)
    np.testing.assert_allclose(softmax(logits).sum(axis=1), 1.0)
    with pytest.raises(WidthMismatch):
        policy_forward(params, np.ones(WIDTH + 1))
    with pytest.raises(WidthMismatch):
        policy_forward(params, np.ones((2, WIDTH)))


def test_optimizer_and_clipping():
    """
    Test Case: The first Adam step moves each weight by about the learning rate against its gradient, and a
    gradient above the norm limit is rescaled
    """
    params = PolicyParams.zeros(WIDTH, N_TICKERS, HIDDEN)
    grads = {name: np.full(array.shape, 2.0) for name, array in params.arrays().items()}

    updated = AdamOptimizer(learning_rate=0.01).step(params, grads)
    clipped, norm = clip_by_global_norm({"a": np.array([3.0, 4.0])}, 1.0)

    np.testing.assert_allclose(updated.W1, -0.01, rtol=1e-4)
    assert norm == 5.0
    assert np.linalg.norm(clipped["a"]) == pytest.approx(1.0, abs=1e-6)
    assert params.is_finite() and np.all(params.W1 == 0.0)


def _advantage_batch(params, n=32):
    rng = np.random.default_rng(5)
    obs = rng.normal(size=(n, WIDTH))
    indices = np.tile(np.array([[2, 1], [0, 1]]), (n // 2, 1))
    logp = log_softmax(forward_batch(params, obs).logits)
    old = logp[np.arange(n)[:, None], np.arange(N_TICKERS)[None, :], indices].sum(axis=1)
    rewards = np.tile([1.0, -1.0], n // 2)
    batch = RolloutBatch.from_steps(obs, indices, old, rewards, np.zeros(n), np.ones(n, dtype=bool))
    return batch.with_advantages(0.99, 0.95)


def test_ppo_update_moves_towards_advantaged_actions():
    """
    Test Case: An update raises the probability of the action with positive advantage and leaves the input
    weights untouched
    """
    params = PolicyParams.initialize(WIDTH, N_TICKERS, np.random.default_rng(0), HIDDEN)
    before = params.copy()
    batch = _advantage_batch(params)
    config = PPOConfig(minibatch=8, epochs_per_update=5, learning_rate=1e-2, hidden_sizes=HIDDEN)

    updated, stats = ppo_update(params, batch, config, rng=np.random.default_rng(1))

    def buy_probability(p):
        return float(np.mean(softmax(forward_batch(p, batch.observations).logits)[:, 0, 2]))

    assert buy_probability(updated) > buy_probability(params)
    assert all(np.array_equal(a, b) for a, b in zip(params.arrays().values(), before.arrays().values()))
    assert {"policy_loss", "value_loss", "entropy", "approx_kl", "clip_fraction", "grad_norm"} <= set(stats)
    with pytest.raises(ValueError):
        ppo_update(params, replace(batch, advantages=None), config)


def test_ppo_update_rejects_non_finite_loss():
    """
    Test Case: Failed to update when the return targets are not finite, with diagnostics attached
    """
    params = PolicyParams.initialize(WIDTH, N_TICKERS, np.random.default_rng(0), HIDDEN)
    batch = _advantage_batch(params)
    broken = replace(batch, returns=np.full(len(batch), np.inf))

    with pytest.raises(NonFiniteLoss) as err:
        ppo_update(params, broken, PPOConfig(minibatch=8, hidden_sizes=HIDDEN))

    assert err.value.diagnostics["epoch"] == 0


def test_ppo_config_validation():
    """
    Test Case: Failed to configure an out-of-range discount or an unknown key; the long run scales up
    """
    with pytest.raises(ConfigError):
        PPOConfig(gamma=0.0)
    with pytest.raises(ConfigError):
        PPOConfig(hidden_sizes=(64,))
    with pytest.raises(ConfigError):
        PPOConfig.from_dict({"learning_rate": 1e-3, "optimizer": "sgd"})
    assert PPOConfig.long_scale().total_timesteps == 500_000
    assert PPOConfig.from_dict(PPOConfig(hidden_sizes=[8, 8]).to_record()) == PPOConfig(hidden_sizes=(8, 8))


@pytest.fixture(scope="module")
def small_env_factory():
    market = generate_market(SynthConfig(tickers=("AAA", "BBB", "CCC"), n_days=60, seed=9))
    config = EnvConfig(universe=("AAA", "BBB", "CCC"), feature_mask="baseline")
    return lambda: TradingEnv(config, market)


def _train(factory, checkpoint_dir=None):
    config = PPOConfig(
        total_timesteps=120,
        rollout_horizon=40,
        minibatch=16,
        epochs_per_update=2,
        checkpoint_every=60,
        hidden_sizes=(8, 8),
    )
    return train(factory, ObsNormalizer(factory().width), config, seed=5, checkpoint_dir=checkpoint_dir)


def test_train_checkpoints_and_curve(small_env_factory, tmp_path):
    """
    Test Case: A short run writes a checkpoint per interval plus the learning curve, and a loaded checkpoint
    replays its evaluation
    """
    result = _train(small_env_factory, tmp_path)

    assert [c.timestep for c in result.checkpoints] == [60, 120]
    assert len(result.update_stats) == 3
    assert result.final.params.is_finite()
    assert not result.final.normalizer.update_enabled
    with open(tmp_path / "learning_curve.csv", newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["timestep", "eval_sharpe", "eval_return"]
    assert [row[0] for row in rows[1:]] == ["60", "120"]

    loaded = Checkpoint.load(tmp_path / "checkpoint_00000120.json")
    env = small_env_factory()
    equity = evaluate_policy(loaded.params, loaded.normalizer, env)
    assert all(np.array_equal(a, b) for a, b in zip(loaded.params.arrays().values(), result.final.params.arrays().values()))
    assert equity[-1][1] / equity[0][1] - 1.0 == pytest.approx(result.curve[-1].eval_return)
    assert [d for d, _ in equity] == list(env.dates)


def test_train_is_reproducible(small_env_factory):
    """
    Test Case: Two runs with the same seed and a fresh normalizer give identical final weights
    """
    first = _train(small_env_factory).final.params
    second = _train(small_env_factory).final.params

    assert all(np.array_equal(a, b) for a, b in zip(first.arrays().values(), second.arrays().values()))


def test_run_policy_episode_needs_frozen_normalizer(small_env_factory):
    """
    Test Case: Failed to evaluate with a normalizer that still updates
    """
    env = small_env_factory()
    params = PolicyParams.initialize(env.width, env.n_tickers, np.random.default_rng(0), (8, 8))

    with pytest.raises(ValueError):
        run_policy_episode(params, ObsNormalizer(env.width), env)
    episode = run_policy_episode(params, ObsNormalizer(env.width).frozen(), env)
    assert len(episode.actions) == len(env.dates) - 1
    assert episode.final.done


LEARNABILITY_SEEDS = (0, 1, 2, 3, 42)


@pytest.fixture(scope="module")
def trending_env_factory():
    days = np.arange(70)
    rising = 100.0 * 1.015 ** days
    falling = 100.0 * 0.985 ** days
    market = make_market(np.column_stack([rising, falling, rising * 0.5, falling * 2.0]))
    config = EnvConfig(universe=market.tickers, feature_mask="baseline")
    return lambda: TradingEnv(config, market)


@pytest.mark.slow
def test_training_beats_first_checkpoint_on_trending_market(trending_env_factory):
    """
    Test Case: On a market with two steadily rising and two steadily falling names, the final checkpoint earns a
    higher evaluation return than the first (untrained) checkpoint in at least four of five seeds
    """
    config = PPOConfig(total_timesteps=50_000, rollout_horizon=2048, checkpoint_every=1024)
    wins = 0
    for seed in LEARNABILITY_SEEDS:
        norm = ObsNormalizer(trending_env_factory().width)
        result = train(trending_env_factory, norm, config, seed=seed)
        first, final = result.curve[0], result.curve[-1]
        assert first.timestep == 1024 and final.timestep == result.checkpoints[-1].timestep
        wins += final.eval_return > first.eval_return

    assert wins >= 4
