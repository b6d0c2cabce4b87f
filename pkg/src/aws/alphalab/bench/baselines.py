#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from datetime import date
from typing import List, Tuple

from ..common.dates import DayRange
from ..synthmarket.types import MarketData
from ..tradenv.errors import RangeError
from .errors import UnknownTicker


def snap_range(market: MarketData, day_range: DayRange) -> DayRange:
    """Shrink a calendar range to the first and last market days inside it."""
    inside = [d for d in market.dates if day_range.contains(d)]
    if not inside:
        raise RangeError(f"No market days in {day_range}")
    return DayRange(inside[0], inside[-1])


def buy_and_hold(
    market: MarketData, ticker: str, day_range: DayRange, initial_cash: float = 100_000.0
) -> List[Tuple[date, float]]:
    """
    Invest ``initial_cash`` in fractional shares of ``ticker`` at the first close in range and hold, with no costs.

    :return: (date, value) for every market day in range.
    """
    if ticker not in market.tickers:
        raise UnknownTicker(ticker)
    col = market.ticker_index(ticker)
    rows = [i for i, d in enumerate(market.dates) if day_range.contains(d)]
    if not rows:
        raise RangeError(f"No market days in {day_range}")
    shares = initial_cash / float(market.close[rows[0], col])
    return [(market.dates[i], shares * float(market.close[i, col])) for i in rows]
