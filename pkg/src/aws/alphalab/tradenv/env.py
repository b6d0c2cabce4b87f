#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..common.io import write_csv
from ..extract.types import FeaturePanel
from ..synthmarket.types import MarketData
from .config import EnvConfig, FeatureMask
from .errors import RangeError, SteppedAfterDone
from .indicators import compute_indicators
from .portfolio import PortfolioState, apply_trades

TRACE_HEADER = ("date", "value", "cash", "turnover", "costs", "reward")


@dataclass(frozen=True)
class EnvState:
    """Immutable environment state: episode position, portfolio and the environment it belongs to."""

    day: int
    portfolio: PortfolioState
    done: bool
    seed: int
    env: "TradingEnv" = field(compare=False, repr=False)

    @property
    def date(self) -> date:
        return self.env.dates[self.day]

    @property
    def prices(self) -> np.ndarray:
        return self.env.prices(self.day)

    @property
    def value(self) -> float:
        return self.portfolio.value(self.prices)


class TradingEnv:
    """
    Daily multi-ticker trading environment. Trades execute at day-d closes; the reward is the scaled change in
    portfolio value from close d (before trading) to close d + 1.

    Observation layout, in order: cash fraction (1), closes (T), holding value fractions (T), indicators ticker-major
    (T x 3: 1-day return, MACD, RSI-14), stock features ticker-major (T x 4, if the mask includes them), macro
    vector (5, if the mask includes it). Masked groups are left out, not zeroed.

    :param config: Environment settings.
    :param market: Market covering the tradable universe and the warm-up history.
    :param panel: Feature panel covering the episode; may be None for the baseline mask.
    """

    def __init__(self, config: EnvConfig, market: MarketData, panel: Optional[FeaturePanel] = None):
        self.config = config
        self.market = market
        self.panel = panel
        missing = [t for t in config.universe if t not in market.tickers]
        if missing:
            raise RangeError(f"Tickers {missing} are not in the market data")
        self._cols = [market.ticker_index(t) for t in config.universe]
        if config.episode is None:
            dates = list(market.dates[config.warmup_days :])
        else:
            if config.episode.start not in market.dates or config.episode.end not in market.dates:
                raise RangeError(f"Episode {config.episode} is not covered by market dates")
            dates = [d for d in market.dates if config.episode.contains(d)]
        if len(dates) < 2:
            raise RangeError("An episode needs at least two trading days")
        self.dates: Tuple[date, ...] = tuple(dates)
        self._rows = [market.date_index(d) for d in self.dates]
        mask = config.feature_mask
        if mask.includes_stock or mask.includes_macro:
            if panel is None:
                raise RangeError(f"Feature mask {mask.value} needs a feature panel")
            uncovered = [d for d in self.dates if d not in panel.macro]
            if uncovered:
                raise RangeError(f"Feature panel does not cover episode day {uncovered[0]}")
        self.indicators = compute_indicators(market, self.dates[0], config.warmup_days)

    @property
    def n_tickers(self) -> int:
        return len(self.config.universe)

    @property
    def width(self) -> int:
        return self.config.width

    def prices(self, day: int) -> np.ndarray:
        return self.market.close[self._rows[day], self._cols]

    def reset(self, seed: int = 0) -> EnvState:
        return EnvState(
            day=0,
            portfolio=PortfolioState.initial(self.config.initial_cash, self.n_tickers),
            done=False,
            seed=seed,
            env=self,
        )

    def build_observation(self, state: EnvState, mask: Optional[FeatureMask] = None) -> np.ndarray:
        mask = FeatureMask(mask) if mask is not None else self.config.feature_mask
        prices = self.prices(state.day)
        holdings_value = np.asarray(state.portfolio.holdings, dtype=float) * prices
        total = state.portfolio.cash + float(holdings_value.sum())
        parts = [
            np.array([state.portfolio.cash / total if total > 0 else 0.0]),
            prices,
            holdings_value / total if total > 0 else np.zeros(self.n_tickers),
            self.indicators.values[self._rows[state.day]][self._cols].ravel(),
        ]
        day = self.dates[state.day]
        if mask.includes_stock:
            parts.append(self.panel.stock_array(day, self.config.universe).ravel())
        if mask.includes_macro:
            parts.append(self.panel.macro[day].as_array())
        return np.concatenate(parts).astype(float)

    def step(self, state: EnvState, actions: Sequence[int]) -> Tuple[EnvState, float, bool, Dict[str, Any]]:
        """
        :param state: Current state, not done.
        :param actions: One of -1, 0, +1 per ticker in universe order.
        :return: (next state, reward, done, info with pnl, turnover, costs and value).
        """
        if state.done:
            raise SteppedAfterDone("Episode already finished; call reset")
        if len(actions) != self.n_tickers:
            raise ValueError(f"Expected {self.n_tickers} actions, got {len(actions)}")
        prices = self.prices(state.day)
        value_before = state.portfolio.value(prices)
        traded = apply_trades(state.portfolio, actions, prices, self.config.cost_bp, self.config.trade_lot)
        next_day = state.day + 1
        next_prices = self.prices(next_day)
        value_after = traded.value(next_prices)
        pnl = float(np.dot(np.asarray(traded.holdings, dtype=float), next_prices - prices))
        done = next_day == len(self.dates) - 1
        info = {
            "date": self.dates[next_day],
            "value": value_after,
            "cash": traded.cash,
            "pnl": pnl,
            "turnover": traded.turnover - state.portfolio.turnover,
            "costs": traded.cumulative_costs - state.portfolio.cumulative_costs,
        }
        next_state = EnvState(day=next_day, portfolio=traded, done=done, seed=state.seed, env=self)
        return next_state, self.config.reward_scale * (value_after - value_before), done, info


def reset(config: EnvConfig, market: MarketData, panel: Optional[FeaturePanel], seed: int = 0) -> EnvState:
    return TradingEnv(config, market, panel).reset(seed)


def step(state: EnvState, actions: Sequence[int]) -> Tuple[EnvState, float, bool, Dict[str, Any]]:
    return state.env.step(state, actions)


def build_observation(state: EnvState, mask: Optional[FeatureMask] = None) -> np.ndarray:
    return state.env.build_observation(state, mask)


@dataclass(frozen=True)
class EpisodeResult:
    """Portfolio values at every episode close (starting with the initial value) and the per-step trace."""

    values: Tuple[float, ...]
    actions: Tuple[Tuple[int, ...], ...]
    trace: Tuple[Dict[str, Any], ...]
    final: EnvState

    def write_trace_csv(self, path: Union[str, Path]) -> Path:
        rows = [
            [row["date"].isoformat(), row["value"], row["cash"], row["turnover"], row["costs"], row["reward"]]
            for row in self.trace
        ]
        return write_csv(path, TRACE_HEADER, rows)


def replay_actions(env: TradingEnv, actions: Sequence[Sequence[int]], seed: int = 0) -> EpisodeResult:
    """
    Run a recorded action trace through the environment. The trace must provide one action vector per step.

    :param env: Environment (its cost level may differ from the one the trace was recorded at).
    :param actions: Action vectors in step order.
    :param seed: Reset seed.
    :return: Episode values and trace.
    """
    state = env.reset(seed)
    values = [state.value]
    trace: List[Dict[str, Any]] = []
    recorded = []
    for vector in actions:
        if state.done:
            break
        state, reward, _, info = env.step(state, vector)
        values.append(info["value"])
        trace.append({**info, "reward": reward})
        recorded.append(tuple(int(a) for a in vector))
    if not state.done:
        raise ValueError(f"Action trace has {len(recorded)} steps, episode needs {len(env.dates) - 1}")
    return EpisodeResult(values=tuple(values), actions=tuple(recorded), trace=tuple(trace), final=state)
