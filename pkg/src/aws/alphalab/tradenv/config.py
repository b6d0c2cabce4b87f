#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass, fields
from enum import auto
from typing import Any, Mapping, Optional, Sequence

from ..common.dates import DayRange
from ..common.enums import AutoStringEnum
from ..common.errors import ConfigError
from .indicators import INDICATOR_NAMES, WARMUP_DAYS

N_STOCK_FEATURES = 4
N_MACRO_FEATURES = 5


class FeatureMask(str, AutoStringEnum):
    """
    Provides enumeration of observation feature groups.

    :cvar baseline: Prices, holdings and technical indicators only.
    :cvar llm_only: Baseline plus per-ticker extracted features.
    :cvar macro_only: Baseline plus the macro vector.
    :cvar full: Baseline plus extracted and macro features.
    """

    baseline = auto()
    llm_only = auto()
    macro_only = auto()
    full = auto()

    @property
    def includes_stock(self) -> bool:
        return self in (FeatureMask.llm_only, FeatureMask.full)

    @property
    def includes_macro(self) -> bool:
        return self in (FeatureMask.macro_only, FeatureMask.full)


def observation_width(n_tickers: int, mask: FeatureMask, n_indicators: int = len(INDICATOR_NAMES)) -> int:
    """1 + 2T + I*T, plus 4T with stock features and 5 with macro features."""
    width = 1 + 2 * n_tickers + n_indicators * n_tickers
    if FeatureMask(mask).includes_stock:
        width += N_STOCK_FEATURES * n_tickers
    if FeatureMask(mask).includes_macro:
        width += N_MACRO_FEATURES
    return width


@dataclass
class EnvConfig:
    """
    Trading environment settings (``[env]`` section).

    :param universe: Tradable tickers in processing order.
    :param initial_cash: Starting cash.
    :param cost_bp: Proportional cost per side in basis points of traded notional.
    :param trade_lot: Maximum shares bought per +1 action.
    :param feature_mask: Observation feature groups.
    :param reward_scale: Multiplier on the change in portfolio value.
    :param episode: Inclusive episode day range; None means every market day after warm-up.
    :param warmup_days: Indicator history required before the episode start.
    """

    universe: Sequence[str]
    initial_cash: float = 100_000.0
    cost_bp: float = 10.0
    trade_lot: int = 10
    feature_mask: FeatureMask = FeatureMask.full
    reward_scale: float = 1e-3
    episode: Optional[DayRange] = None
    warmup_days: int = WARMUP_DAYS

    def __post_init__(self):
        self.universe = tuple(self.universe)
        self.feature_mask = FeatureMask(self.feature_mask)
        if not self.universe or len(set(self.universe)) != len(self.universe):
            raise ConfigError("env.universe must list each ticker once")
        if self.cost_bp < 0:
            raise ConfigError("env.cost_bp must be non-negative")
        if self.trade_lot < 1:
            raise ConfigError("env.trade_lot must be at least 1")
        if not self.initial_cash > 0 or not self.reward_scale > 0:
            raise ConfigError("env.initial_cash and env.reward_scale must be positive")

    @property
    def width(self) -> int:
        return observation_width(len(self.universe), self.feature_mask)

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "EnvConfig":
        unknown = set(values) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigError(f"Unknown [env] keys: {sorted(unknown)}")
        values = dict(values)
        if isinstance(values.get("episode"), (list, tuple)):
            values["episode"] = DayRange.parse(*values["episode"])
        return cls(**values)
