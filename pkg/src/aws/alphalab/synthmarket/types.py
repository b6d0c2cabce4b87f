#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import json
from dataclasses import dataclass, field
from datetime import date
from enum import auto
from pathlib import Path
from typing import Any, Dict, Mapping, Sequence, Tuple, Union

import numpy as np

from ..common.dates import DayRange, parse_date
from ..common.enums import AutoStringEnum
from ..common.io import atomic_write_json
from ..extract.types import MacroFeatures

MAX_HORIZON_DAYS = 20


class Regime(str, AutoStringEnum):
    """
    Provides enumeration of market regimes.

    :cvar calm: Low volatility, low correlation.
    :cvar shock: High volatility, high correlation, elevated VIX.
    """

    calm = auto()
    shock = auto()


@dataclass(frozen=True)
class HiddenEvent:
    """Ground-truth news event: drift ``alpha_per_day`` is added to log-returns on days date+1 .. date+horizon."""

    ticker: str
    date: date
    true_alpha_direction: int
    strength: float
    horizon_days: int
    alpha_per_day: float

    def __post_init__(self):
        object.__setattr__(self, "date", parse_date(self.date))
        if self.true_alpha_direction not in (-1, 1):
            raise ValueError("true_alpha_direction must be -1 or +1")
        if not 0.0 < self.strength <= 1.0:
            raise ValueError(f"strength {self.strength} is outside (0, 1]")
        if not 1 <= self.horizon_days <= MAX_HORIZON_DAYS:
            raise ValueError(f"horizon_days {self.horizon_days} is outside [1, {MAX_HORIZON_DAYS}]")

    def to_record(self) -> Dict[str, Any]:
        return {
            "ticker": self.ticker,
            "date": self.date.isoformat(),
            "true_alpha_direction": self.true_alpha_direction,
            "strength": self.strength,
            "horizon_days": self.horizon_days,
            "alpha_per_day": self.alpha_per_day,
        }

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "HiddenEvent":
        return cls(
            ticker=record["ticker"],
            date=parse_date(record["date"]),
            true_alpha_direction=int(record["true_alpha_direction"]),
            strength=float(record["strength"]),
            horizon_days=int(record["horizon_days"]),
            alpha_per_day=float(record["alpha_per_day"]),
        )


@dataclass(frozen=True)
class MarketData:
    """
    Daily OHLCV bars for a universe plus the macro series and regime labels. Price arrays are (dates x tickers).
    """

    dates: Tuple[date, ...]
    tickers: Tuple[str, ...]
    open: np.ndarray
    high: np.ndarray
    low: np.ndarray
    close: np.ndarray
    volume: np.ndarray
    macro_series: Mapping[date, MacroFeatures]
    regime: Tuple[Regime, ...]
    _date_index: Dict[date, int] = field(init=False, repr=False, compare=False)
    _ticker_index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(parse_date(d) for d in self.dates))
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "regime", tuple(Regime(r) for r in self.regime))
        shape = (len(self.dates), len(self.tickers))
        for name in ("open", "high", "low", "close", "volume"):
            array = np.asarray(getattr(self, name), dtype=float)
            if array.shape != shape:
                raise ValueError(f"{name} has shape {array.shape}, expected {shape}")
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        if len(self.regime) != len(self.dates):
            raise ValueError("One regime label per date is required")
        missing = [d for d in self.dates if d not in self.macro_series]
        if missing:
            raise ValueError(f"Macro series is missing {missing[0]}")
        object.__setattr__(self, "_date_index", {d: i for i, d in enumerate(self.dates)})
        object.__setattr__(self, "_ticker_index", {t: i for i, t in enumerate(self.tickers)})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MarketData):
            return NotImplemented
        return (
            self.dates == other.dates
            and self.tickers == other.tickers
            and self.regime == other.regime
            and all(np.array_equal(getattr(self, n), getattr(other, n)) for n in ("open", "high", "low", "close", "volume"))
            and all(self.macro_series[d] == other.macro_series[d] for d in self.dates)
        )

    __hash__ = None

    def date_index(self, day: date) -> int:
        return self._date_index[day]

    def ticker_index(self, ticker: str) -> int:
        return self._ticker_index[ticker]

    def bar(self, day: date, ticker: str) -> Tuple[float, float, float, float, float]:
        i, j = self._date_index[day], self._ticker_index[ticker]
        return (
            float(self.open[i, j]),
            float(self.high[i, j]),
            float(self.low[i, j]),
            float(self.close[i, j]),
            float(self.volume[i, j]),
        )

    def vix(self) -> np.ndarray:
        return np.array([self.macro_series[d].vix for d in self.dates], dtype=float)

    def subset(self, tickers: Sequence[str] = None, dates: Sequence[date] = None) -> "MarketData":
        """
        Restrict to a ticker subset and/or a set of dates, keeping the original order of each.

        :param tickers: Tickers to keep (must all be present).
        :param dates: Dates to keep (absent dates are ignored).
        :return: A new MarketData.
        """
        cols = [self._ticker_index[t] for t in tickers] if tickers is not None else list(range(len(self.tickers)))
        wanted = {parse_date(d) for d in dates} if dates is not None else None
        rows = [i for i, d in enumerate(self.dates) if wanted is None or d in wanted]
        keep = [self.dates[i] for i in rows]
        return MarketData(
            dates=tuple(keep),
            tickers=tuple(self.tickers[j] for j in cols),
            open=self.open[np.ix_(rows, cols)],
            high=self.high[np.ix_(rows, cols)],
            low=self.low[np.ix_(rows, cols)],
            close=self.close[np.ix_(rows, cols)],
            volume=self.volume[np.ix_(rows, cols)],
            macro_series={d: self.macro_series[d] for d in keep},
            regime=tuple(self.regime[i] for i in rows),
        )

    def window(self, days: DayRange) -> "MarketData":
        return self.subset(dates=[d for d in self.dates if days.contains(d)])

    def to_record(self) -> Dict[str, Any]:
        return {
            "dates": [d.isoformat() for d in self.dates],
            "tickers": list(self.tickers),
            "open": self.open.tolist(),
            "high": self.high.tolist(),
            "low": self.low.tolist(),
            "close": self.close.tolist(),
            "volume": self.volume.tolist(),
            "macro": [self.macro_series[d].to_record() for d in self.dates],
            "regime": [r.value for r in self.regime],
        }

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "MarketData":
        dates = tuple(parse_date(d) for d in record["dates"])
        return cls(
            dates=dates,
            tickers=tuple(record["tickers"]),
            open=np.array(record["open"], dtype=float),
            high=np.array(record["high"], dtype=float),
            low=np.array(record["low"], dtype=float),
            close=np.array(record["close"], dtype=float),
            volume=np.array(record["volume"], dtype=float),
            macro_series={d: MacroFeatures.from_record(m) for d, m in zip(dates, record["macro"])},
            regime=tuple(Regime(r) for r in record["regime"]),
        )

    def save(self, path: Union[str, Path]) -> Path:
        return atomic_write_json(path, self.to_record(), indent=None)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "MarketData":
        with open(path, encoding="utf-8") as handle:
            return cls.from_record(json.load(handle))
