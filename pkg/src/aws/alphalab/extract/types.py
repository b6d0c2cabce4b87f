#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import json
import math
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..common.dates import parse_date
from ..common.io import atomic_write_json

STOCK_FIELDS = ("sentiment", "impact", "conflicting_signals", "news_novelty")
MACRO_FIELDS = ("vix", "treasury_10y", "credit_spread", "market_sentiment", "macro_event_flag")
STOCK_BOUNDS = {
    "sentiment": (-1.0, 1.0),
    "impact": (0.0, 1.0),
    "conflicting_signals": (0.0, 1.0),
    "news_novelty": (0.0, 1.0),
}


@dataclass(frozen=True)
class StockFeatures:
    """
    Per (ticker, day) feature vector produced by an extractor. An all-zero vector means "no signal".
    The reasoning text is kept for audit only and never reaches the agent.
    """

    sentiment: float = 0.0
    impact: float = 0.0
    conflicting_signals: float = 0.0
    news_novelty: float = 0.0
    reasoning: str = ""

    FIELDS = STOCK_FIELDS

    def __post_init__(self):
        for name in STOCK_FIELDS:
            value = float(getattr(self, name))
            low, high = STOCK_BOUNDS[name]
            if not math.isfinite(value) or value < low or value > high:
                raise ValueError(f"{name}={value} is outside [{low}, {high}]")
            object.__setattr__(self, name, value)

    @classmethod
    def zero(cls) -> "StockFeatures":
        return cls()

    @property
    def is_zero(self) -> bool:
        return all(getattr(self, name) == 0.0 for name in STOCK_FIELDS)

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in STOCK_FIELDS], dtype=float)

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {name: getattr(self, name) for name in STOCK_FIELDS}
        record["reasoning"] = self.reasoning
        return record

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "StockFeatures":
        return cls(**{name: float(record[name]) for name in STOCK_FIELDS}, reasoning=str(record.get("reasoning", "")))


@dataclass(frozen=True)
class MacroFeatures:
    """Market-wide features for one date; the same vector applies to every ticker."""

    vix: float
    treasury_10y: float
    credit_spread: float
    market_sentiment: float = 0.0
    macro_event_flag: float = 0.0

    FIELDS = MACRO_FIELDS

    def __post_init__(self):
        for name in MACRO_FIELDS:
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if self.vix < 0:
            raise ValueError(f"vix={self.vix} is negative")
        if not -1.0 <= self.market_sentiment <= 1.0:
            raise ValueError(f"market_sentiment={self.market_sentiment} is outside [-1, 1]")
        if self.macro_event_flag not in (0.0, 1.0):
            raise ValueError(f"macro_event_flag={self.macro_event_flag} is not binary")

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in MACRO_FIELDS], dtype=float)

    def to_record(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in MACRO_FIELDS}

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "MacroFeatures":
        return cls(**{name: float(record[name]) for name in MACRO_FIELDS})


@dataclass(frozen=True)
class FeaturePanel:
    """
    Complete date x ticker grid of stock features plus one macro vector per date.

    :param dates: Ordered trading days.
    :param tickers: Ordered universe.
    :param stock: (date, ticker) -> StockFeatures, defined for every cell.
    :param macro: date -> MacroFeatures, defined for every date.
    """

    dates: Tuple[date, ...]
    tickers: Tuple[str, ...]
    stock: Mapping[Tuple[date, str], StockFeatures]
    macro: Mapping[date, MacroFeatures]
    _date_index: Dict[date, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(parse_date(day) for day in self.dates))
        object.__setattr__(self, "tickers", tuple(self.tickers))
        if list(self.dates) != sorted(set(self.dates)):
            raise ValueError("Panel dates must be strictly increasing")
        if len(set(self.tickers)) != len(self.tickers):
            raise ValueError("Panel tickers must be unique")
        missing_cells = [(d, t) for d in self.dates for t in self.tickers if (d, t) not in self.stock]
        if missing_cells:
            raise ValueError(f"Panel is missing {len(missing_cells)} stock cells, first {missing_cells[0]}")
        missing_macro = [d for d in self.dates if d not in self.macro]
        if missing_macro:
            raise ValueError(f"Panel is missing macro features for {missing_macro[0]}")
        object.__setattr__(self, "_date_index", {day: i for i, day in enumerate(self.dates)})

    def cell(self, day: date, ticker: str) -> StockFeatures:
        return self.stock[(day, ticker)]

    def date_index(self, day: date) -> int:
        return self._date_index[day]

    def feature_matrix(self, name: str, tickers: Optional[Sequence[str]] = None) -> np.ndarray:
        """
        Return one feature as a (dates x tickers) matrix. Macro features are broadcast across tickers.

        :param name: Stock or macro feature name.
        :param tickers: Optional ticker subset/order; defaults to the panel universe.
        :return: Float matrix.
        """
        tickers = tuple(tickers) if tickers is not None else self.tickers
        if name in STOCK_FIELDS:
            return np.array([[getattr(self.stock[(d, t)], name) for t in tickers] for d in self.dates], dtype=float)
        if name in MACRO_FIELDS:
            column = np.array([getattr(self.macro[d], name) for d in self.dates], dtype=float)
            return np.repeat(column[:, None], len(tickers), axis=1)
        raise KeyError(f"Unknown feature {name}")

    def stock_array(self, day: date, tickers: Sequence[str]) -> np.ndarray:
        """Stock features for one day as a (len(tickers) x 4) array; tickers outside the panel get zeros."""
        zero = StockFeatures.zero()
        return np.array([self.stock.get((day, t), zero).as_array() for t in tickers], dtype=float)

    def restrict(self, dates: Iterable[date]) -> "FeaturePanel":
        wanted = {parse_date(d) for d in dates}
        keep = [d for d in self.dates if d in wanted]
        return FeaturePanel(
            dates=tuple(keep),
            tickers=self.tickers,
            stock={(d, t): self.stock[(d, t)] for d in keep for t in self.tickers},
            macro={d: self.macro[d] for d in keep},
        )

    def to_record(self) -> Dict[str, Any]:
        return {
            "dates": [d.isoformat() for d in self.dates],
            "tickers": list(self.tickers),
            "stock": [[self.stock[(d, t)].to_record() for t in self.tickers] for d in self.dates],
            "macro": [self.macro[d].to_record() for d in self.dates],
        }

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "FeaturePanel":
        dates = [parse_date(d) for d in record["dates"]]
        tickers = list(record["tickers"])
        stock = {
            (d, t): StockFeatures.from_record(cell)
            for d, row in zip(dates, record["stock"])
            for t, cell in zip(tickers, row)
        }
        macro = {d: MacroFeatures.from_record(m) for d, m in zip(dates, record["macro"])}
        return cls(dates=tuple(dates), tickers=tuple(tickers), stock=stock, macro=macro)

    def save(self, path: Union[str, Path]) -> Path:
        return atomic_write_json(path, self.to_record(), indent=None)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FeaturePanel":
        with open(path, encoding="utf-8") as handle:
            return cls.from_record(json.load(handle))
