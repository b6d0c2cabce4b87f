#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import csv

import numpy as np
import pytest

from aws.alphalab.backfill import BackfillStore, TradingCalendar
from aws.alphalab.common import ConfigError, DayRange
from aws.alphalab.synthmarket import (
    HiddenEvent,
    MarketData,
    Regime,
    SynthConfig,
    events_from_items,
    export_market,
    generate_events,
    generate_market,
    inject_events,
    pseudo_headlines,
    read_events_jsonl,
    trading_dates,
    write_events_jsonl,
)


def _config(**overrides):
    values = dict(tickers=("AAA", "BBB", "CCC", "DDD", "EEE"), n_days=60, seed=42)
    values.update(overrides)
    return SynthConfig(**values)


def test_generate_market_deterministic():
    """
    Test Case: The same seed twice produces identical markets and a different seed does not
    """
    assert generate_market(_config()) == generate_market(_config())
    assert generate_market(_config()) != generate_market(_config(seed=43))


def test_ohlc_invariants_hold_on_every_bar():
    """
    Test Case: 5 tickers by 252 days keep low <= open/close <= high with positive close and volume
    """
    market = generate_market(_config(n_days=252, p_calm_to_shock=0.05))

    assert market.close.shape == (252, 5)
    assert np.all(market.low <= np.minimum(market.open, market.close))
    assert np.all(np.maximum(market.open, market.close) <= market.high)
    assert np.all(market.close > 0)
    assert np.all(market.volume > 0)


def test_trading_dates_follow_calendar():
    """
    Test Case: Market dates are exchange trading days from the configured start
    """
    calendar = TradingCalendar.from_csv()

    dates = trading_dates(_config(n_days=30))

    assert len(dates) == 30
    assert all(day in calendar for day in dates)
    assert list(dates) == sorted(dates)


def test_shock_regime_raises_vix():
    """
    Test Case: Mean VIX on shock days exceeds calm days for every seed that visits both regimes
    """
    visited = 0
    for seed in range(5):
        market = generate_market(_config(n_days=250, p_calm_to_shock=0.05, seed=seed))
        shock = np.array([r == Regime.shock for r in market.regime])
        if shock.all() or not shock.any():
            continue
        visited += 1
        vix = market.vix()
        assert vix[shock].mean() > vix[~shock].mean()
    assert visited >= 3


def _regime_returns(config):
    """Daily log-returns split into shock and calm days; None when either regime has fewer than 20 days."""
    market = generate_market(config)
    returns = np.diff(np.log(market.close), axis=0)
    shock = np.array([r == Regime.shock for r in market.regime[1:]])
    if shock.sum() < 20 or (~shock).sum() < 20:
        return None
    return returns[shock].ravel(), returns[~shock].ravel()


def test_shock_regime_raises_volatility():
    """
    Test Case: Realized volatility is higher on shock days than on calm days
    """
    splits = [_regime_returns(_config(n_days=250, p_calm_to_shock=0.05, seed=seed)) for seed in range(5)]
    splits = [split for split in splits if split is not None]

    assert splits
    assert all(shock.std() > calm.std() for shock, calm in splits)


def test_equal_regime_vols_are_indistinguishable():
    """
    Test Case: With identical calm and shock parameters the pooled per-regime volatilities agree within 10%
    """
    overrides = dict(n_days=250, base_vol_shock=0.01, corr_shock=0.2, p_calm_to_shock=0.05)
    splits = [_regime_returns(_config(seed=seed, **overrides)) for seed in range(10)]
    splits = [split for split in splits if split is not None]
    shock = np.concatenate([s for s, _ in splits])
    calm = np.concatenate([c for _, c in splits])

    assert len(splits) >= 3
    assert shock.std() / calm.std() == pytest.approx(1.0, abs=0.1)



def test_no_events_leave_market_unchanged():
    """
    Test Case: An event rate of zero draws nothing and re-simulation reproduces the drift-free market
    """
    config = _config(event_rate=0.0)
    market = generate_market(config)

    events = generate_events(config, market)

    assert events == []
    assert inject_events(config, events) == market


def test_events_avoid_final_horizon():
    """
    Test Case: No event is scheduled within the final horizon days, and inactive regimes carry zero drift
    """
    config = _config(n_days=120, event_rate=0.5, p_calm_to_shock=0.1, alpha_regimes=["calm"])
    market = generate_market(config)

    events = generate_events(config, market)

    last_allowed = market.dates[-config.event_horizon - 1]
    assert events
    assert all(event.date <= last_allowed for event in events)
    for event in events:
        regime = market.regime[market.date_index(event.date)]
        if regime == Regime.shock:
            assert event.alpha_per_day == 0.0
        else:
            expected = event.true_alpha_direction * event.strength * config.alpha_scale / config.event_horizon
            assert event.alpha_per_day == pytest.approx(expected)


@pytest.mark.slow
def test_single_event_drift_is_visible():
    """
    Test Case: A strong positive event produces a positive horizon return in at least 95% of 100 seeds
    """
    positive = 0
    for seed in range(100):
        config = _config(tickers=("AAA",), n_days=30, alpha_scale=0.2, base_vol_calm=0.005, p_calm_to_shock=0.0, seed=seed)
        dates = trading_dates(config)
        event = HiddenEvent("AAA", dates[5], 1, 1.0, config.event_horizon, config.alpha_scale / config.event_horizon)
        market = inject_events(config, [event])
        start = market.close[5, 0]
        end = market.close[5 + config.event_horizon, 0]
        positive += end > start
    assert positive >= 95


def test_pseudo_headlines_one_per_event():
    """
    Test Case: 3 events give 3 items with matching tickers, stamped before that day's close
    """
    config = _config(event_rate=0.2)
    events = generate_events(config, generate_market(config))[:3]
    calendar = TradingCalendar.from_csv()

    items = pseudo_headlines(events)

    assert [item.ticker for item in items] == [event.ticker for event in events]
    assert all(item.published_at < calendar.close_utc(event.date) for item, event in zip(items, events))
    assert pseudo_headlines([]) == []


def test_headlines_round_trip_through_backfill():
    """
    Test Case: Events recovered from the store's bundles equal the planted events
    """
    config = _config(event_rate=0.3)
    market = generate_market(config)
    events = generate_events(config, market)
    store = BackfillStore(None, TradingCalendar.from_csv())
    store.put_items(pseudo_headlines(events))

    bundles = store.query_bundles(market.tickers, DayRange(market.dates[0], market.dates[-1]))
    recovered = events_from_items(item for bundle in bundles for item in bundle.items)

    assert recovered == sorted(events, key=lambda e: (e.date, e.ticker))
    assert all(event.date == bundle.date for bundle in bundles for event in events_from_items(bundle.items))


def test_events_jsonl_round_trip(tmp_path):
    """
    Test Case: Successfully write and read back the events file
    """
    config = _config(event_rate=0.2)
    events = generate_events(config, generate_market(config))

    assert read_events_jsonl(write_events_jsonl(tmp_path / "events.jsonl", events)) == events


def test_export_market(tmp_path):
    """
    Test Case: Export writes the market JSON, per-ticker OHLCV files and the macro CSV
    """
    market = generate_market(_config(n_days=20))

    export_market(market, tmp_path)

    assert MarketData.load(tmp_path / "market.json") == market
    with open(tmp_path / "ohlcv" / "AAA.csv", newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["date", "open", "high", "low", "close", "volume"]
    assert len(rows) == 21
    assert (tmp_path / "macro.csv").exists()


def test_market_window_and_subset():
    """
    Test Case: Restricting to tickers and a day range keeps the original order
    """
    market = generate_market(_config(n_days=20))
    window = DayRange(market.dates[2], market.dates[5])

    sub = market.subset(tickers=["CCC", "AAA"]).window(window)

    assert sub.tickers == ("CCC", "AAA")
    assert sub.dates == market.dates[2:6]
    assert sub.close[0, 1] == market.close[2, 0]


@pytest.mark.parametrize(
    "overrides",
    [{"base_vol_calm": 0.0}, {"event_rate": 1.5}, {"corr_shock": 1.0}, {"event_horizon": 25}, {"n_days": 1}],
)
def test_config_validation(overrides):
    """
    Test Case: Failed to build a config with non-positive or out-of-range parameters
    """
    with pytest.raises(ConfigError):
        _config(**overrides)


def test_config_rejects_unknown_keys():
    """
    Test Case: Failed to read a [synth] section with an unknown key
    """
    with pytest.raises(ConfigError):
        SynthConfig.from_dict({"n_days": 30, "drift": 0.1})
