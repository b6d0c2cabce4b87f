#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import logging
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from ..common.errors import ConfigError
from ..extract.types import FeaturePanel
from ..synthmarket.types import MarketData
from .errors import MetricUndefined, NoSignal
from .ic import DEFAULT_MIN_NAMES, ICReport, daily_ic_series, ic_summary
from .returns import ReturnPanel, forward_returns

N_BUCKETS = 5
# Extra names in an uneven split go to the middle buckets first, the extremes last.
REMAINDER_ORDER = (2, 1, 3, 0, 4)
UNINFORMED_BRIER = 0.25


def _cells(panel: FeaturePanel, rets: ReturnPanel, feature: str = "sentiment") -> Tuple[np.ndarray, ...]:
    dates = [d for d in panel.dates if rets.has_date(d)]
    rows = [panel.date_index(d) for d in dates]
    return (
        panel.feature_matrix(feature)[rows],
        panel.feature_matrix("impact")[rows],
        rets.matrix(dates, panel.tickers),
    )


def hit_rate(panel: FeaturePanel, rets: ReturnPanel) -> float:
    """
    Directional accuracy over cells with non-zero sentiment and a defined return. A zero return is a miss.

    :return: Fraction of hits in [0, 1].
    """
    sentiment, _, returns = _cells(panel, rets)
    mask = (sentiment != 0.0) & np.isfinite(returns)
    if not mask.any():
        raise NoSignal("No cell with non-zero sentiment and a defined return")
    hits = np.sign(sentiment[mask]) == np.sign(returns[mask])
    return float(np.mean(hits))


def bucket_sizes(n: int, n_buckets: int = N_BUCKETS) -> Tuple[int, ...]:
    sizes = [n // n_buckets] * n_buckets
    for position in REMAINDER_ORDER[: n % n_buckets]:
        sizes[position] += 1
    return tuple(sizes)


def quintile_spread(
    panel: FeaturePanel, rets: ReturnPanel, feature: str = "sentiment", min_names: int = N_BUCKETS
) -> float:
    """
    Mean over days of (mean return of the top feature bucket - mean return of the bottom bucket). Each day the
    valid names are sorted by feature, descending, and cut into five contiguous buckets. Days with fewer than
    ``min_names`` valid names or a constant feature are skipped.

    :return: Mean daily spread in return units of the panel horizon.
    """
    values, _, returns = _cells(panel, rets, feature)
    spreads = []
    for day_values, day_returns in zip(values, returns):
        valid = np.isfinite(day_returns) & np.isfinite(day_values)
        if int(valid.sum()) < max(min_names, N_BUCKETS):
            continue
        f, r = day_values[valid], day_returns[valid]
        if np.all(f == f[0]):
            continue
        ordered = r[np.argsort(-f, kind="stable")]
        sizes = bucket_sizes(len(ordered))
        spreads.append(float(np.mean(ordered[: sizes[0]]) - np.mean(ordered[len(ordered) - sizes[-1] :])))
    if not spreads:
        raise NoSignal(f"No qualifying day for the {feature} quintile spread")
    return float(np.mean(spreads))


def brier(panel: FeaturePanel, rets: ReturnPanel) -> float:
    """
    Brier score of ``p_up = clamp(0.5 + 0.5 * sign(sentiment) * impact, 0, 1)`` against the up/down outcome, over
    cells with non-zero sentiment and a defined return.
    """
    sentiment, impact, returns = _cells(panel, rets)
    mask = (sentiment != 0.0) & np.isfinite(returns)
    if not mask.any():
        raise NoSignal("No cell with non-zero sentiment and a defined return")
    p_up = np.clip(0.5 + 0.5 * np.sign(sentiment[mask]) * impact[mask], 0.0, 1.0)
    outcome = (returns[mask] > 0).astype(float)
    return float(np.mean((p_up - outcome) ** 2))


def signal_coverage(panel: FeaturePanel) -> float:
    """Fraction of (date, ticker) cells whose stock features are not the all-zero vector."""
    total = len(panel.dates) * len(panel.tickers)
    if total == 0:
        raise ValueError("Coverage of an empty panel is undefined")
    return sum(not panel.stock[(d, t)].is_zero for d in panel.dates for t in panel.tickers) / total


@dataclass(frozen=True)
class CompositeWeights:
    """
    Weights of the composite score
    ``ic_ir * w_ic + (2 * hit_rate - 1) * w_hit + clamp(spread / spread_scale, -1, 1) * w_spread - brier * w_brier``.
    """

    ic_ir: float = 0.5
    hit: float = 0.3
    spread: float = 0.2
    brier: float = 0.0
    spread_scale: float = 0.02

    def __post_init__(self):
        if not self.spread_scale > 0:
            raise ConfigError("spread_scale must be positive")

    def to_record(self) -> Dict[str, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "CompositeWeights":
        unknown = set(values) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigError(f"Unknown composite weight keys: {sorted(unknown)}")
        return cls(**values)


@dataclass(frozen=True)
class SignalMetrics:
    """
    Signal-quality metrics of one feature panel at one horizon. Metrics that are undefined on the panel are listed
    in ``undefined`` and carry neutral-or-worse fallbacks: hit rate 0, spread 0, Brier 0.25, no IC report.
    """

    ic_report: Optional[ICReport]
    hit_rate: float
    quintile_spread: float
    brier: float
    signal_coverage: float
    composite: Optional[float] = None
    horizon_days: int = 5
    undefined: Tuple[str, ...] = ()
    weights: CompositeWeights = field(default_factory=CompositeWeights)

    @property
    def ic_ir(self) -> float:
        return self.ic_report.ic_ir if self.ic_report is not None else 0.0

    @property
    def ic_mean(self) -> float:
        return self.ic_report.ic_mean if self.ic_report is not None else 0.0

    def to_record(self) -> Dict[str, Any]:
        return {
            "horizon_days": self.horizon_days,
            "ic": self.ic_report.to_record() if self.ic_report is not None else None,
            "ic_ir": self.ic_ir,
            "hit_rate": self.hit_rate,
            "quintile_spread": self.quintile_spread,
            "brier": self.brier,
            "signal_coverage": self.signal_coverage,
            "composite": self.composite,
            "undefined": list(self.undefined),
            "weights": self.weights.to_record(),
        }


def composite(metrics: SignalMetrics, weights: Optional[CompositeWeights] = None) -> float:
    """
    :param metrics: Metrics whose composite field is ignored.
    :param weights: Weights; defaults to the weights recorded on ``metrics``.
    :return: The composite score.
    """
    w = weights or metrics.weights
    spread_term = min(1.0, max(-1.0, metrics.quintile_spread / w.spread_scale))
    return (
        w.ic_ir * metrics.ic_ir
        + w.hit * (2.0 * metrics.hit_rate - 1.0)
        + w.spread * spread_term
        - w.brier * metrics.brier
    )


def compute_signal_metrics(
    panel: FeaturePanel,
    market: MarketData,
    horizon_days: int = 5,
    weights: Optional[CompositeWeights] = None,
    feature: str = "sentiment",
    min_names: int = DEFAULT_MIN_NAMES,
) -> SignalMetrics:
    """
    All signal-quality metrics of a panel at one horizon, composite included.

    :param panel: Feature panel.
    :param market: Market providing forward returns (may extend past the panel).
    :param horizon_days: Forward-return horizon.
    :param weights: Composite weights.
    :param feature: Feature the IC is computed on.
    :param min_names: Minimum names per IC day.
    :return: Metrics with composite filled in.
    """
    weights = weights or CompositeWeights()
    rets = forward_returns(market, horizon_days)
    undefined = []
    try:
        report: Optional[ICReport] = ic_summary(daily_ic_series(feature, panel, rets, min_names=min_names))
    except MetricUndefined as err:
        logging.warning(f"IC undefined: {err}")
        report = None
        undefined.append("ic")
    values = {}
    for name, func, fallback in (
        ("hit_rate", hit_rate, 0.0),
        ("quintile_spread", quintile_spread, 0.0),
        ("brier", brier, UNINFORMED_BRIER),
    ):
        try:
            values[name] = func(panel, rets)
        except MetricUndefined as err:
            logging.warning(f"{name} undefined: {err}")
            values[name] = fallback
            undefined.append(name)
    metrics = SignalMetrics(
        ic_report=report,
        signal_coverage=signal_coverage(panel),
        horizon_days=horizon_days,
        undefined=tuple(undefined),
        weights=weights,
        **values,
    )
    return replace(metrics, composite=composite(metrics, weights))
