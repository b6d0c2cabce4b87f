#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass, field, fields
from datetime import date
from typing import Any, Mapping, Optional, Tuple

from ..common.dates import parse_date
from ..common.errors import ConfigError
from ..common.universes import load_universe
from .types import Regime


@dataclass
class SynthConfig:
    """
    Parameters of the synthetic market (``[synth]`` section).

    Volatilities are daily log-return standard deviations. The VIX follows a mean-reverting process towards the
    level of the current regime; regimes switch as a two-state Markov chain.
    """

    n_tickers: int = 38
    n_days: int = 250
    start: date = date(2023, 1, 3)
    tickers: Optional[Tuple[str, ...]] = None
    base_vol_calm: float = 0.01
    base_vol_shock: float = 0.025
    corr_calm: float = 0.2
    corr_shock: float = 0.6
    vix_kappa: float = 0.2
    vix_level_calm: float = 16.0
    vix_level_shock: float = 35.0
    vix_noise: float = 1.0
    p_calm_to_shock: float = 0.02
    p_shock_to_calm: float = 0.1
    event_rate: float = 0.4
    alpha_scale: float = 0.05
    event_horizon: int = 5
    strength_low: float = 0.2
    strength_high: float = 1.0
    alpha_regimes: Tuple[Regime, ...] = field(default_factory=lambda: (Regime.calm, Regime.shock))
    treasury_start: float = 4.0
    credit_spread_start: float = 1.2
    seed: int = 42

    def __post_init__(self):
        self.start = parse_date(self.start)
        self.alpha_regimes = tuple(Regime(regime) for regime in self.alpha_regimes)
        if self.tickers is not None:
            self.tickers = tuple(self.tickers)
            self.n_tickers = len(self.tickers)
        self.validate()

    def validate(self) -> "SynthConfig":
        if self.n_tickers < 1 or self.n_days < 2:
            raise ConfigError("synth.n_tickers must be >= 1 and synth.n_days >= 2")
        if self.tickers is not None and len(set(self.tickers)) != len(self.tickers):
            raise ConfigError("synth.tickers lists a ticker twice")
        positive = ("base_vol_calm", "base_vol_shock", "vix_kappa", "vix_level_calm", "vix_level_shock", "alpha_scale")
        for name in positive:
            if not getattr(self, name) > 0:
                raise ConfigError(f"synth.{name} must be positive, got {getattr(self, name)}")
        if self.vix_noise < 0:
            raise ConfigError("synth.vix_noise must be non-negative")
        if self.vix_kappa > 1:
            raise ConfigError("synth.vix_kappa must not exceed 1")
        for name in ("corr_calm", "corr_shock"):
            if not 0.0 <= getattr(self, name) < 1.0:
                raise ConfigError(f"synth.{name} must lie in [0, 1)")
        for name in ("p_calm_to_shock", "p_shock_to_calm", "event_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"synth.{name} must lie in [0, 1]")
        if not 1 <= self.event_horizon <= 20:
            raise ConfigError("synth.event_horizon must lie in [1, 20]")
        if self.event_horizon >= self.n_days:
            raise ConfigError("synth.event_horizon must be shorter than the sample")
        if not 0.0 < self.strength_low <= self.strength_high <= 1.0:
            raise ConfigError("synth strengths must satisfy 0 < strength_low <= strength_high <= 1")
        return self

    def universe(self) -> Tuple[str, ...]:
        """Configured tickers, else the first n names of the signal universe, padded with SYNnnn names."""
        if self.tickers is not None:
            return self.tickers
        signal = load_universe("signal")
        names = signal[: self.n_tickers]
        names += [f"SYN{i:03d}" for i in range(len(names), self.n_tickers)]
        return tuple(names)

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "SynthConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"Unknown [synth] keys: {sorted(unknown)}")
        try:
            return cls(**values)
        except (TypeError, ValueError) as err:
            if isinstance(err, ConfigError):
                raise
            raise ConfigError(f"Invalid [synth] section: {err}") from err
