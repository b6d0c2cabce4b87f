#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass, field
from datetime import date
from typing import Dict, Sequence, Tuple

import numpy as np

from ..synthmarket.types import MarketData
from .errors import HorizonError


@dataclass(frozen=True)
class ReturnPanel:
    """
    Forward log-returns over (d, d + horizon] as a (dates x tickers) matrix. Cells whose horizon runs past the end
    of the sample hold NaN.
    """

    horizon_days: int
    dates: Tuple[date, ...]
    tickers: Tuple[str, ...]
    values: np.ndarray
    _date_index: Dict[date, int] = field(init=False, repr=False, compare=False)
    _ticker_index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.dates), len(self.tickers)):
            raise ValueError(f"Return matrix shape {values.shape} does not match {len(self.dates)}x{len(self.tickers)}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_date_index", {d: i for i, d in enumerate(self.dates)})
        object.__setattr__(self, "_ticker_index", {t: j for j, t in enumerate(self.tickers)})

    def value(self, day: date, ticker: str) -> float:
        return float(self.values[self._date_index[day], self._ticker_index[ticker]])

    def has_date(self, day: date) -> bool:
        return day in self._date_index

    def matrix(self, dates: Sequence[date], tickers: Sequence[str]) -> np.ndarray:
        """Returns for the requested grid; dates or tickers outside the panel yield NaN."""
        out = np.full((len(dates), len(tickers)), np.nan)
        cols = [(k, self._ticker_index[t]) for k, t in enumerate(tickers) if t in self._ticker_index]
        for i, day in enumerate(dates):
            row = self._date_index.get(day)
            if row is None:
                continue
            for k, j in cols:
                out[i, k] = self.values[row, j]
        return out


def forward_returns(market: MarketData, horizon_days: int) -> ReturnPanel:
    """
    Forward log-returns ``ln(close[d + h] / close[d])`` using trading-day offsets.

    :param market: Market data.
    :param horizon_days: Horizon h >= 1, shorter than the sample.
    :return: Return panel with NaN for the last h days.
    """
    n = len(market.dates)
    if horizon_days < 1 or horizon_days >= n:
        raise HorizonError(f"Horizon {horizon_days} needs 1 <= h < {n} trading days")
    log_close = np.log(market.close)
    values = np.full(log_close.shape, np.nan)
    values[: n - horizon_days] = log_close[horizon_days:] - log_close[: n - horizon_days]
    return ReturnPanel(horizon_days=horizon_days, dates=market.dates, tickers=market.tickers, values=values)
