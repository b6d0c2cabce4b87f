#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import logging
from dataclasses import dataclass
from datetime import date
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..backfill.calendar import TradingCalendar
from ..common.seeding import seed_sequence
from ..extract.macro import event_flag, market_sentiment_from_vix
from ..extract.types import MacroFeatures
from .config import SynthConfig
from .types import HiddenEvent, MarketData, Regime

# Order of the children spawned from the master seed; appending keeps existing streams stable.
_REGIME, _MACRO, _FACTOR, _TICKERS, _EVENTS = range(5)
_STREAMS = 5


@dataclass(frozen=True)
class Scenario:
    """A market with planted drift together with the events that planted it."""

    market: MarketData
    events: Tuple[HiddenEvent, ...]


def _streams(config: SynthConfig) -> List[np.random.SeedSequence]:
    return seed_sequence(config.seed).spawn(_STREAMS)


def trading_dates(config: SynthConfig, calendar: Optional[TradingCalendar] = None) -> Tuple[date, ...]:
    """
    The first ``n_days`` trading days on or after ``config.start``. Days past the end of the packaged exchange
    calendar continue on plain business days.
    """
    calendar = calendar or TradingCalendar.from_csv()
    days = [d for d in calendar.days if d >= config.start][: config.n_days]
    if len(days) < config.n_days:
        anchor = np.datetime64(days[-1] if days else config.start, "D")
        offset = 1 if days else 0
        extra = np.busday_offset(anchor, np.arange(offset, offset + config.n_days - len(days)), roll="forward")
        days.extend(d.astype(object) for d in extra)
    return tuple(days)


def _regimes(config: SynthConfig, rng: np.random.Generator) -> Tuple[Regime, ...]:
    draws = rng.random(config.n_days)
    regimes = [Regime.calm]
    for t in range(1, config.n_days):
        if regimes[-1] == Regime.calm:
            regimes.append(Regime.shock if draws[t] < config.p_calm_to_shock else Regime.calm)
        else:
            regimes.append(Regime.calm if draws[t] < config.p_shock_to_calm else Regime.shock)
    return tuple(regimes)


def _macro(config: SynthConfig, dates: Sequence[date], regimes: Sequence[Regime], rng: np.random.Generator):
    n = config.n_days
    shocks = rng.standard_normal((n, 3))
    vix = np.empty(n)
    treasury = np.empty(n)
    spread = np.empty(n)
    vix[0], treasury[0], spread[0] = config.vix_level_calm, config.treasury_start, config.credit_spread_start
    for t in range(1, n):
        level = config.vix_level_shock if regimes[t] == Regime.shock else config.vix_level_calm
        vix[t] = max(1.0, vix[t - 1] + config.vix_kappa * (level - vix[t - 1]) + config.vix_noise * shocks[t, 0])
        treasury[t] = max(0.0, treasury[t - 1] + 0.03 * shocks[t, 1])
        spread[t] = max(0.1, spread[t - 1] + 0.02 * shocks[t, 2] + 0.01 * (vix[t] - vix[t - 1]))
    series = {}
    for t, day in enumerate(dates):
        switched = t > 0 and regimes[t] != regimes[t - 1]
        series[day] = MacroFeatures(
            vix=float(vix[t]),
            treasury_10y=float(treasury[t]),
            credit_spread=float(spread[t]),
            market_sentiment=market_sentiment_from_vix(float(vix[t])),
            macro_event_flag=event_flag(float(vix[t]), float(vix[t - 1]) if t > 0 else None, switched),
        )
    return series


def _simulate(config: SynthConfig, alpha: np.ndarray) -> MarketData:
    """
    Simulate bars with a (dates x tickers) drift matrix added to the log-returns. Every random draw is taken
    independently of ``alpha`` so two calls differing only in drift share the same noise path.
    """
    config.validate()
    streams = _streams(config)
    dates = trading_dates(config)
    tickers = config.universe()
    n, k = config.n_days, len(tickers)
    if alpha.shape != (n, k):
        raise ValueError(f"Drift matrix has shape {alpha.shape}, expected {(n, k)}")

    regimes = _regimes(config, np.random.default_rng(streams[_REGIME]))
    macro = _macro(config, dates, regimes, np.random.default_rng(streams[_MACRO]))
    factor = np.random.default_rng(streams[_FACTOR]).standard_normal(n)
    shock = np.array([r == Regime.shock for r in regimes])
    vol = np.where(shock, config.base_vol_shock, config.base_vol_calm)
    rho = np.where(shock, config.corr_shock, config.corr_calm)

    opens, highs, lows, closes, volumes = (np.empty((n, k)) for _ in range(5))
    for j, child in enumerate(streams[_TICKERS].spawn(k)):
        rng = np.random.default_rng(child)
        start_price = rng.uniform(20.0, 500.0)
        noise = rng.standard_normal((n, 4))
        volume_noise = rng.standard_normal(n)
        log_ret = vol * (np.sqrt(rho) * factor + np.sqrt(1.0 - rho) * noise[:, 0]) - 0.5 * vol**2 + alpha[:, j]
        log_ret[0] = 0.0
        close = start_price * np.exp(np.cumsum(log_ret))
        previous = np.concatenate([[start_price], close[:-1]])
        open_ = previous * np.exp(0.2 * vol * noise[:, 1])
        highs[:, j] = np.maximum(open_, close) * np.exp(0.5 * vol * np.abs(noise[:, 2]))
        lows[:, j] = np.minimum(open_, close) * np.exp(-0.5 * vol * np.abs(noise[:, 3]))
        opens[:, j] = open_
        closes[:, j] = close
        volumes[:, j] = np.maximum(1.0, np.round(1e6 * np.exp(0.3 * volume_noise) * np.where(shock, 1.5, 1.0)))

    return MarketData(
        dates=dates,
        tickers=tickers,
        open=opens,
        high=highs,
        low=lows,
        close=closes,
        volume=volumes,
        macro_series=macro,
        regime=regimes,
    )


def generate_market(config: SynthConfig) -> MarketData:
    """
    Generate a drift-free market: geometric random-walk closes whose volatility and pairwise correlation rise in
    the shock regime, with a VIX path reverting towards the current regime's level.

    :param config: Validated synthetic market config.
    :return: Reproducible market data for ``config.seed``.
    """
    tickers = config.universe()
    market = _simulate(config, np.zeros((config.n_days, len(tickers))))
    logging.info(f"Generated synthetic market: {len(market.tickers)} tickers x {len(market.dates)} days, seed {config.seed}")
    return market


def generate_events(config: SynthConfig, market: MarketData) -> List[HiddenEvent]:
    """
    Draw hidden events at ``event_rate`` per ticker-day. Events are never scheduled within the final
    ``event_horizon`` days so their forward returns always exist. Events dated in a regime outside
    ``alpha_regimes`` carry zero drift: their headlines are pure noise.

    :param config: Same config (seed family) the market was generated from.
    :param market: The drift-free market.
    :return: Events in (date, ticker) order.
    """
    rng = np.random.default_rng(_streams(config)[_EVENTS])
    n, k = len(market.dates), len(market.tickers)
    horizon = config.event_horizon
    occurs = rng.random((n, k)) < config.event_rate
    directions = np.where(rng.random((n, k)) < 0.5, -1, 1)
    strengths = rng.uniform(config.strength_low, config.strength_high, size=(n, k))
    events = []
    for t in range(max(0, n - horizon)):
        active = market.regime[t] in config.alpha_regimes
        for j in range(k):
            if not occurs[t, j]:
                continue
            strength = float(strengths[t, j])
            direction = int(directions[t, j])
            alpha = direction * strength * config.alpha_scale / horizon if active else 0.0
            events.append(
                HiddenEvent(
                    ticker=market.tickers[j],
                    date=market.dates[t],
                    true_alpha_direction=direction,
                    strength=strength,
                    horizon_days=horizon,
                    alpha_per_day=alpha,
                )
            )
    logging.info(f"Drew {len(events)} hidden events at rate {config.event_rate}")
    return events


def drift_matrix(config: SynthConfig, events: Sequence[HiddenEvent]) -> np.ndarray:
    """Per-day drift implied by the events: each adds alpha_per_day on days date+1 .. date+horizon_days."""
    dates = trading_dates(config)
    tickers = config.universe()
    row = {d: i for i, d in enumerate(dates)}
    col = {t: j for j, t in enumerate(tickers)}
    alpha = np.zeros((len(dates), len(tickers)))
    for event in events:
        i, j = row[event.date], col[event.ticker]
        alpha[i + 1 : i + 1 + event.horizon_days, j] += event.alpha_per_day
    return alpha


def inject_events(config: SynthConfig, events: Sequence[HiddenEvent]) -> MarketData:
    """
    Re-simulate the market with the events' drift added to future log-returns, keeping bars coherent.

    :param config: The generating config.
    :param events: Events from :func:`generate_events`.
    :return: Market with planted alpha.
    """
    return _simulate(config, drift_matrix(config, events))


def generate_scenario(config: SynthConfig) -> Scenario:
    """Market with planted drift plus the events that planted it."""
    events = generate_events(config, generate_market(config))
    return Scenario(market=inject_events(config, events), events=tuple(events))
