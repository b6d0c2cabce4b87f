#  Copyright 2024 Amazon.com, Inc. or its affiliates.

# flake8: noqa
from .config import EnvConfig, FeatureMask, observation_width
from .env import EnvState, EpisodeResult, TradingEnv, build_observation, replay_actions, reset, step
from .errors import RangeError, SharpeUndefined, SteppedAfterDone, WarmupError, WidthMismatch
from .indicators import INDICATOR_NAMES, IndicatorPanel, compute_indicators, ema, macd, rsi
from .normalizer import ObsNormalizer, normalize_obs
from .performance import max_drawdown, returns_from_values, sharpe, total_return
from .portfolio import PortfolioState, apply_trades
