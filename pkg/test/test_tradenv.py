#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import csv
import math
from dataclasses import replace

import numpy as np
import pytest
from conftest import make_market, make_panel

from aws.alphalab.common import ConfigError, DayRange
from aws.alphalab.synthmarket import SynthConfig, generate_market
from aws.alphalab.tradenv import (
    EnvConfig,
    EnvState,
    FeatureMask,
    ObsNormalizer,
    PortfolioState,
    RangeError,
    SharpeUndefined,
    SteppedAfterDone,
    TradingEnv,
    WarmupError,
    WidthMismatch,
    apply_trades,
    build_observation,
    compute_indicators,
    max_drawdown,
    normalize_obs,
    observation_width,
    replay_actions,
    reset,
    returns_from_values,
    sharpe,
    step,
    total_return,
)

TICKERS = ("AAA", "BBB", "CCC", "DDD", "EEE")


@pytest.fixture(scope="module")
def market():
    return generate_market(SynthConfig(tickers=TICKERS, n_days=80, seed=3))


@pytest.fixture(scope="module")
def panel(market):
    rng = np.random.default_rng(0)
    return make_panel(rng.uniform(-1, 1, size=(len(market.dates), len(TICKERS))), tickers=TICKERS, dates=market.dates)


def _random_actions(rng, n_steps, n_tickers):
    return [tuple(int(a) for a in rng.integers(-1, 2, size=n_tickers)) for _ in range(n_steps)]


def test_observation_widths():
    """
    Test Case: Five tickers give width 26 for the baseline mask and 51 for the full mask
    """
    assert observation_width(5, FeatureMask.baseline) == 26
    assert observation_width(5, FeatureMask.llm_only) == 46
    assert observation_width(5, FeatureMask.macro_only) == 31
    assert observation_width(5, FeatureMask.full) == 51


def test_build_observation_layout(market, panel):
    """
    Test Case: The observation starts all-cash with closes next, and each mask omits its groups
    """
    env = TradingEnv(EnvConfig(universe=TICKERS), market, panel)
    state = env.reset()

    obs = env.build_observation(state)

    assert obs.shape == (51,)
    assert obs[0] == 1.0
    np.testing.assert_array_equal(obs[1:6], env.prices(0))
    np.testing.assert_array_equal(obs[6:11], np.zeros(5))
    stock_start = 1 + 2 * 5 + 3 * 5
    assert obs[stock_start] == panel.cell(env.dates[0], "AAA").sentiment
    np.testing.assert_array_equal(obs[-5:], panel.macro[env.dates[0]].as_array())
    np.testing.assert_array_equal(build_observation(state), obs)
    for mask in FeatureMask:
        assert env.build_observation(state, mask).shape == (observation_width(5, mask),)


def test_reset_is_reproducible(market, panel):
    """
    Test Case: Two resets with the same seed give equal states with all cash and no holdings
    """
    config = EnvConfig(universe=TICKERS, initial_cash=50_000.0)

    first = reset(config, market, panel, seed=4)
    second = reset(config, market, panel, seed=4)

    assert first == second
    assert first.portfolio.cash == 50_000.0
    assert first.portfolio.holdings == (0,) * 5
    assert first.date == market.dates[30]


def test_episode_range_errors(market, panel):
    """
    Test Case: Failed to build episodes outside the market, without warm-up or without a panel
    """
    late = DayRange.parse("2099-01-02", "2099-02-02")

    with pytest.raises(RangeError):
        TradingEnv(EnvConfig(universe=TICKERS, episode=late), market, panel)
    with pytest.raises(WarmupError):
        TradingEnv(EnvConfig(universe=TICKERS, episode=DayRange(market.dates[10], market.dates[40])), market, panel)
    with pytest.raises(RangeError):
        TradingEnv(EnvConfig(universe=TICKERS, feature_mask="llm_only"), market, None)
    with pytest.raises(RangeError):
        TradingEnv(EnvConfig(universe=("AAA", "ZZZ"), feature_mask="baseline"), market, None)


def test_env_config_validation():
    """
    Test Case: Failed to configure negative costs, empty lots or a repeated ticker
    """
    with pytest.raises(ConfigError):
        EnvConfig(universe=TICKERS, cost_bp=-1)
    with pytest.raises(ConfigError):
        EnvConfig(universe=TICKERS, trade_lot=0)
    with pytest.raises(ConfigError):
        EnvConfig(universe=("AAA", "AAA"))
    with pytest.raises(ConfigError):
        EnvConfig.from_dict({"universe": TICKERS, "leverage": 2})
    parsed = EnvConfig.from_dict({"universe": TICKERS, "episode": ["2023-03-01", "2023-04-28"], "feature_mask": "full"})
    assert parsed.episode == DayRange.parse("2023-03-01", "2023-04-28")


def test_apply_trades_buy_with_cost():
    """
    Test Case: Buying 10 shares at 100 with 10bp cost leaves 8999 cash
    """
    after = apply_trades(PortfolioState.initial(10_000.0, 1), [1], [100.0], cost_bp=10.0, trade_lot=10)

    assert after.holdings == (10,)
    assert after.cash == pytest.approx(8999.0)
    assert after.cumulative_costs == pytest.approx(1.0)


def test_apply_trades_affordability_and_noop():
    """
    Test Case: A buy shrinks to what cash covers and selling nothing is a no-op
    """
    after = apply_trades(PortfolioState.initial(500.0, 1), [1], [100.0], cost_bp=0.0, trade_lot=10)
    unchanged = apply_trades(PortfolioState.initial(500.0, 1), [-1], [100.0], cost_bp=10.0)

    assert after.holdings == (5,)
    assert after.cash == 0.0
    assert unchanged == PortfolioState.initial(500.0, 1)


def test_apply_trades_sells_before_buys():
    """
    Test Case: Cash freed by a sale funds a buy of an earlier ticker in the same step
    """
    portfolio = PortfolioState(cash=0.0, holdings=(0, 10))

    after = apply_trades(portfolio, [1, -1], [100.0, 100.0], cost_bp=0.0, trade_lot=10)

    assert after.holdings == (10, 0)
    assert after.cash == 0.0
    assert after.turnover == 2000.0


def test_step_rewards():
    """
    Test Case: Flat prices with holds give zero reward; holding 10 shares through 100 -> 101 gives 0.01
    """
    closes = np.array([100.0] * 31 + [101.0, 101.0])
    env = TradingEnv(EnvConfig(universe=("T0",), feature_mask="baseline"), make_market(closes))
    holding = EnvState(day=0, portfolio=PortfolioState(cash=0.0, holdings=(10,)), done=False, seed=0, env=env)

    _, reward, done, info = env.step(holding, [0])
    flat = env.step(env.step(env.reset(), [0])[0], [0])

    assert reward == pytest.approx(0.01)
    assert info["value"] == pytest.approx(1010.0)
    assert not done
    assert flat[1] == 0.0 and flat[2]


def test_step_after_done(market):
    """
    Test Case: Stepping a finished episode raises and the last step reports done
    """
    config = EnvConfig(universe=TICKERS, feature_mask="baseline", episode=DayRange(market.dates[30], market.dates[32]))
    env = TradingEnv(config, market)
    state, _, done, _ = step(env.reset(), [0] * 5)
    assert not done
    state, _, done, _ = step(state, [0] * 5)
    assert done

    with pytest.raises(SteppedAfterDone):
        step(state, [0] * 5)
    with pytest.raises(ValueError):
        env.step(env.reset(), [0, 0])


def test_accounting_conservation_and_bounds(market):
    """
    Test Case: Over 10,000 random action steps value equals initial cash plus price P&L minus costs to 1e-9, with
    no shorts and no negative cash
    """
    rng = np.random.default_rng(7)
    env = TradingEnv(EnvConfig(universe=TICKERS, feature_mask="baseline", initial_cash=20_000.0), market)
    steps = 0
    while steps < 10_000:
        state = env.reset(steps)
        pnl = []
        done = False
        while not done and steps < 10_000:
            state, _, done, info = env.step(state, _random_actions(rng, 1, 5)[0])
            steps += 1
            pnl.append(info["pnl"])
            assert state.portfolio.cash >= 0.0
            assert min(state.portfolio.holdings) >= 0
            expected = 20_000.0 + math.fsum(pnl) - state.portfolio.cumulative_costs
            assert abs(state.value - expected) <= 1e-9
    assert steps == 10_000


def test_fixed_trace_cost_monotonicity(market):
    """
    Test Case: Replaying one action trace at rising cost levels never raises the final value
    """
    rng = np.random.default_rng(11)
    base = EnvConfig(universe=TICKERS, feature_mask="baseline", initial_cash=10_000_000.0)
    n_steps = len(TradingEnv(base, market).dates) - 1
    actions = _random_actions(rng, n_steps, 5)

    finals = []
    for cost in (0.0, 5.0, 10.0, 20.0, 50.0):
        env = TradingEnv(replace(base, cost_bp=cost), market)
        finals.append(replay_actions(env, actions).values[-1])

    assert all(later <= earlier for earlier, later in zip(finals, finals[1:]))
    assert finals[-1] < finals[0]


def test_replay_actions_trace_csv(market, tmp_path):
    """
    Test Case: A replayed episode writes one trace row per step
    """
    env = TradingEnv(EnvConfig(universe=TICKERS, feature_mask="baseline"), market)
    actions = [(1, 0, 0, 0, -1)] * (len(env.dates) - 1)

    result = replay_actions(env, actions)
    with open(result.write_trace_csv(tmp_path / "trace.csv"), newline="") as handle:
        rows = list(csv.reader(handle))

    assert rows[0] == ["date", "value", "cash", "turnover", "costs", "reward"]
    assert len(rows) == len(env.dates)
    assert len(result.values) == len(env.dates)
    with pytest.raises(ValueError):
        replay_actions(env, actions[:3])


def test_indicators_on_constant_and_rising_series():
    """
    Test Case: A flat series has zero return and MACD with neutral RSI; a rising one has RSI 100
    """
    flat = compute_indicators(make_market(np.full(40, 50.0)))
    rising = compute_indicators(make_market(100.0 + np.arange(40.0)))

    assert np.all(flat.values[:, 0, 0] == 0.0)
    assert np.all(flat.values[:, 0, 1] == 0.0)
    assert np.all(flat.values[:, 0, 2] == 50.0)
    assert np.all(rising.values[15:, 0, 2] == 100.0)
    assert np.all(np.isfinite(rising.values))
    with pytest.raises(WarmupError):
        compute_indicators(make_market(np.full(20, 50.0)))


def test_normalizer_constant_stream_and_clip():
    """
    Test Case: A constant stream normalizes to zeros and a z-score of 15 is clipped to exactly 10
    """
    constant = ObsNormalizer(3)
    outputs = [normalize_obs(constant, np.array([1.0, 2.0, 3.0])) for _ in range(5)]

    norm = ObsNormalizer(1)
    norm.normalize(np.array([1.0]))
    norm.normalize(np.array([-1.0]))
    frozen = norm.frozen()

    assert all(np.all(out == 0.0) for out in outputs)
    assert frozen.transform(np.array([15.0]))[0] == 10.0
    assert frozen.normalize(np.array([15.0]))[0] == 10.0
    assert frozen.count == 2


def test_normalizer_frozen_is_pure_and_bounded():
    """
    Test Case: A frozen normalizer returns identical outputs and every output stays within the clip bound
    """
    rng = np.random.default_rng(8)
    norm = ObsNormalizer(4)
    for _ in range(50):
        assert np.all(np.abs(norm.normalize(rng.normal(0, 100, size=4))) <= 10.0)
    frozen = ObsNormalizer.from_record(norm.to_record())
    obs = rng.normal(size=4)

    assert not frozen.update_enabled
    np.testing.assert_array_equal(frozen.normalize(obs), frozen.normalize(obs))
    np.testing.assert_allclose(frozen.normalize(obs), norm.transform(obs))
    with pytest.raises(WidthMismatch):
        frozen.normalize(np.zeros(3))


def test_performance_metrics():
    """
    Test Case: Sharpe annualizes mean over sample deviation, drawdown measures the worst fall from a peak
    """
    returns = 0.001 + 0.01 * np.array([1.0, -1.0]) / math.sqrt(2.0)

    assert sharpe(returns) == pytest.approx(0.1 * math.sqrt(252), rel=1e-9)
    assert sharpe(returns) == pytest.approx(1.5875, abs=1e-4)
    assert max_drawdown([100.0, 120.0, 90.0, 110.0]) == pytest.approx(0.25)
    assert total_return([100.0, 110.0]) == pytest.approx(0.1)
    np.testing.assert_allclose(returns_from_values([100.0, 110.0, 99.0]), [0.1, -0.1])
    with pytest.raises(SharpeUndefined):
        sharpe([0.5, 0.5, 0.5])
    with pytest.raises(SharpeUndefined):
        sharpe([0.01])


@pytest.mark.parametrize("value", [0.1, 0.2, 0.001, -0.07])
def test_sharpe_undefined_for_constant_inexact_returns(value):
    """
    Test Case: Failed on constant returns whose value leaves a rounding residue in the sample deviation
    """
    with pytest.raises(SharpeUndefined):
        sharpe([value] * 3)
    with pytest.raises(SharpeUndefined):
        sharpe([value] * 250)
