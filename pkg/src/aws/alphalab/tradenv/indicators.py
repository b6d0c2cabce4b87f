#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass
from datetime import date
from typing import Optional, Tuple

import numpy as np

from ..synthmarket.types import MarketData
from .errors import WarmupError

INDICATOR_NAMES = ("ret1", "macd", "rsi14")
WARMUP_DAYS = 30
RSI_PERIOD = 14


def ema(series: np.ndarray, span: int) -> np.ndarray:
    """Exponential moving average seeded with the first value; a constant series is a fixed point."""
    alpha = 2.0 / (span + 1.0)
    out = np.empty(len(series), dtype=float)
    value = float(series[0])
    for i, x in enumerate(series):
        value += alpha * (float(x) - value)
        out[i] = value
    return out


def macd(close: np.ndarray) -> np.ndarray:
    return ema(close, 12) - ema(close, 26)


def rsi(close: np.ndarray, period: int = RSI_PERIOD) -> np.ndarray:
    """
    Wilder RSI. Values before ``period`` deltas exist are the neutral 50; a window with neither gains nor losses
    is 50, one with gains and no losses is 100.
    """
    out = np.full(len(close), 50.0)
    if len(close) <= period:
        return out
    delta = np.diff(close)
    gains = np.maximum(delta, 0.0)
    losses = np.maximum(-delta, 0.0)
    avg_gain = float(np.mean(gains[:period]))
    avg_loss = float(np.mean(losses[:period]))
    for t in range(period, len(close)):
        if t > period:
            avg_gain = (avg_gain * (period - 1) + gains[t - 1]) / period
            avg_loss = (avg_loss * (period - 1) + losses[t - 1]) / period
        if avg_loss == 0.0:
            out[t] = 50.0 if avg_gain == 0.0 else 100.0
        else:
            out[t] = 100.0 - 100.0 / (1.0 + avg_gain / avg_loss)
    return out


@dataclass(frozen=True)
class IndicatorPanel:
    """Indicators as a (dates x tickers x 3) array in the order 1-day log return, MACD, RSI-14."""

    dates: Tuple[date, ...]
    tickers: Tuple[str, ...]
    values: np.ndarray

    @property
    def n_indicators(self) -> int:
        return self.values.shape[2]


def compute_indicators(
    market: MarketData, episode_start: Optional[date] = None, warmup_days: int = WARMUP_DAYS
) -> IndicatorPanel:
    """
    Technical indicators per ticker over the whole market history.

    :param market: Market data.
    :param episode_start: First episode day; needs ``warmup_days`` of history before it.
    :param warmup_days: Required history.
    :return: Indicator panel aligned with the market dates.
    """
    if len(market.dates) <= warmup_days:
        raise WarmupError(f"{len(market.dates)} days of history; indicators need more than {warmup_days}")
    if episode_start is not None and market.date_index(episode_start) < warmup_days:
        raise WarmupError(f"Episode start {episode_start} has fewer than {warmup_days} days of history")
    close = market.close
    values = np.zeros((len(market.dates), len(market.tickers), len(INDICATOR_NAMES)))
    log_close = np.log(close)
    values[1:, :, 0] = log_close[1:] - log_close[:-1]
    for j in range(len(market.tickers)):
        values[:, j, 1] = macd(close[:, j])
        values[:, j, 2] = rsi(close[:, j])
    return IndicatorPanel(dates=market.dates, tickers=market.tickers, values=values)
