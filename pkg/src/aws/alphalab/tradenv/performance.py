#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import math
from typing import Sequence

import numpy as np

from ..common.numeric import sample_std
from .errors import SharpeUndefined

TRADING_DAYS = 252


def returns_from_values(values: Sequence[float]) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    return v[1:] / v[:-1] - 1.0


def sharpe(returns: Sequence[float], periods_per_year: int = TRADING_DAYS) -> float:
    """
    Annualized Sharpe ratio of per-period simple returns with zero risk-free rate and sample deviation.

    :param returns: Per-period returns.
    :param periods_per_year: Annualization factor.
    :return: mean / std * sqrt(periods_per_year).
    """
    r = np.asarray(returns, dtype=float)
    if len(r) < 2:
        raise SharpeUndefined("Sharpe needs at least two returns")
    std = sample_std(r)
    if std is None:
        raise SharpeUndefined("Sharpe is undefined for a constant return series")
    return float(np.mean(r)) / std * math.sqrt(periods_per_year)


def max_drawdown(values: Sequence[float]) -> float:
    """Largest peak-to-trough loss as a non-negative fraction of the peak."""
    v = np.asarray(values, dtype=float)
    if len(v) == 0:
        return 0.0
    peaks = np.maximum.accumulate(v)
    return float(np.max((peaks - v) / peaks))


def total_return(values: Sequence[float]) -> float:
    return float(values[-1] / values[0] - 1.0)
