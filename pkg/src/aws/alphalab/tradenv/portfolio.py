#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

ACTION_SELL, ACTION_HOLD, ACTION_BUY = -1, 0, 1


@dataclass(frozen=True)
class PortfolioState:
    """Cash, integer long-only holdings in universe order, and running cost and turnover totals."""

    cash: float
    holdings: Tuple[int, ...]
    cumulative_costs: float = 0.0
    turnover: float = 0.0

    @classmethod
    def initial(cls, cash: float, n_tickers: int) -> "PortfolioState":
        return cls(cash=float(cash), holdings=(0,) * n_tickers)

    def value(self, prices: Sequence[float]) -> float:
        return self.cash + float(np.dot(np.asarray(self.holdings, dtype=float), np.asarray(prices, dtype=float)))


def apply_trades(
    portfolio: PortfolioState,
    actions: Sequence[int],
    prices: Sequence[float],
    cost_bp: float,
    trade_lot: int = 10,
) -> PortfolioState:
    """
    Execute one day's actions at the given prices. All sells run before any buy, each pass in universe order.
    -1 liquidates the ticker, +1 buys up to ``trade_lot`` shares reduced to what the cash covers including cost,
    0 holds. Cost is ``notional * cost_bp / 10000`` per side.

    :param portfolio: State before trading.
    :param actions: One of -1, 0, +1 per ticker.
    :param prices: Positive execution prices.
    :param cost_bp: Cost in basis points.
    :param trade_lot: Maximum shares per buy.
    :return: State after trading.
    """
    if len(actions) != len(portfolio.holdings) or len(prices) != len(portfolio.holdings):
        raise ValueError("actions and prices must have one entry per ticker")
    rate = cost_bp / 10_000.0
    cash = portfolio.cash
    costs = portfolio.cumulative_costs
    turnover = portfolio.turnover
    holdings = list(portfolio.holdings)
    for i, action in enumerate(actions):
        if action == ACTION_SELL and holdings[i] > 0:
            notional = holdings[i] * float(prices[i])
            cost = notional * rate
            cash += notional - cost
            costs += cost
            turnover += notional
            holdings[i] = 0
    for i, action in enumerate(actions):
        if action != ACTION_BUY:
            continue
        price = float(prices[i])
        quantity = trade_lot
        while quantity > 0 and cash - quantity * price - quantity * price * rate < 0:
            quantity -= 1
        if quantity == 0:
            continue
        notional = quantity * price
        cost = notional * rate
        cash = cash - notional - cost
        costs += cost
        turnover += notional
        holdings[i] += quantity
    return PortfolioState(cash=cash, holdings=tuple(holdings), cumulative_costs=costs, turnover=turnover)
