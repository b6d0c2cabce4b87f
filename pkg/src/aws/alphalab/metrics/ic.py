#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import logging
import math
from dataclasses import dataclass
from datetime import date
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..common.numeric import sample_std
from ..extract.types import FeaturePanel
from ..synthmarket.types import MarketData
from .errors import DegenerateInput, EmptySeries, MetricUndefined
from .returns import ReturnPanel, forward_returns

DEFAULT_MIN_NAMES = 5


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """
    Spearman rank correlation: Pearson correlation of average ranks.

    :param xs: First sample.
    :param ys: Second sample, same length.
    :return: rho in [-1, 1].
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("spearman needs two one-dimensional samples of equal length")
    if len(x) < 3:
        raise DegenerateInput(f"spearman needs at least 3 pairs, got {len(x)}")
    rx = stats.rankdata(x) - (len(x) + 1) / 2.0
    ry = stats.rankdata(y) - (len(y) + 1) / 2.0
    sxx = float(np.dot(rx, rx))
    syy = float(np.dot(ry, ry))
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInput("spearman is undefined when a side is constant")
    rho = float(np.dot(rx, ry)) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, rho))


class ICSeries(list):
    """List of (date, ic) pairs that also records how many days were skipped."""

    def __init__(self, pairs=(), skipped_days: int = 0):
        super().__init__(pairs)
        self.skipped_days = skipped_days

    @property
    def values(self) -> List[float]:
        return [ic for _, ic in self]


@dataclass(frozen=True)
class ICReport:
    """Summary of a daily IC series; ``ic_std`` is the sample (n - 1) deviation and ``t_stat = ic_ir * sqrt(n)``."""

    daily_ics: Tuple[float, ...]
    n_days: int
    ic_mean: float
    ic_std: float
    ic_ir: float
    t_stat: float
    pct_positive: float

    def to_record(self) -> Dict[str, Any]:
        return {
            "n_days": self.n_days,
            "ic_mean": self.ic_mean,
            "ic_std": self.ic_std,
            "ic_ir": self.ic_ir,
            "t_stat": self.t_stat,
            "pct_positive": self.pct_positive,
        }


def t_stat_from_ir(ic_ir: float, n_days: int) -> float:
    return ic_ir * math.sqrt(n_days)


def _aligned(panel: FeaturePanel, feature: str, rets: ReturnPanel) -> Tuple[List[date], np.ndarray, np.ndarray]:
    dates = [d for d in panel.dates if rets.has_date(d)]
    features = panel.feature_matrix(feature)
    rows = [panel.date_index(d) for d in dates]
    return dates, features[rows], rets.matrix(dates, panel.tickers)


def daily_ic_series(
    feature: str, panel: FeaturePanel, rets: ReturnPanel, min_names: int = DEFAULT_MIN_NAMES
) -> ICSeries:
    """
    Cross-sectional Spearman IC between a feature and forward returns, one value per qualifying day. A day
    qualifies with at least ``min_names`` names having a defined return and a non-constant feature and return
    cross-section; other days are skipped and counted.

    :param feature: Stock or macro feature name.
    :param panel: Feature panel.
    :param rets: Forward returns.
    :param min_names: Minimum valid names per day.
    :return: The series; raises EmptySeries when no day qualifies.
    """
    dates, features, returns = _aligned(panel, feature, rets)
    series = ICSeries(skipped_days=len(panel.dates) - len(dates))
    for i, day in enumerate(dates):
        valid = np.isfinite(returns[i]) & np.isfinite(features[i])
        if int(valid.sum()) < min_names:
            series.skipped_days += 1
            continue
        try:
            series.append((day, spearman(features[i][valid], returns[i][valid])))
        except DegenerateInput:
            series.skipped_days += 1
    if not series:
        raise EmptySeries(f"No qualifying day for feature {feature} at horizon {rets.horizon_days}")
    if series.skipped_days:
        logging.debug(f"Skipped {series.skipped_days} degenerate days for feature {feature}")
    return series


def ic_summary(series: Sequence[Tuple[date, float]]) -> ICReport:
    """
    :param series: Daily (date, ic) pairs, at least two.
    :return: Mean, sample deviation, information ratio and t-statistic of the series.
    """
    ics = np.array([ic for _, ic in series], dtype=float)
    if len(ics) == 0:
        raise EmptySeries("IC series is empty")
    if len(ics) < 2:
        raise DegenerateInput("IC summary needs at least two days")
    mean = float(np.mean(ics))
    std = sample_std(ics)
    if std is None:
        raise DegenerateInput("IC series has zero dispersion")
    ir = mean / std
    return ICReport(
        daily_ics=tuple(float(v) for v in ics),
        n_days=len(ics),
        ic_mean=mean,
        ic_std=std,
        ic_ir=ir,
        t_stat=t_stat_from_ir(ir, len(ics)),
        pct_positive=float(np.mean(ics > 0)),
    )


def ic_decay(
    feature: str,
    panel: FeaturePanel,
    market: MarketData,
    horizons: Sequence[int],
    min_names: int = DEFAULT_MIN_NAMES,
) -> List[Tuple[int, Optional[ICReport]]]:
    """
    IC summary at each horizon. A horizon whose IC is undefined (every day degenerate) yields None; horizon
    errors propagate.

    :param feature: Feature name.
    :param panel: Feature panel.
    :param market: Market providing closes.
    :param horizons: Ascending horizons.
    :param min_names: Minimum valid names per day.
    :return: (horizon, report or None) per horizon.
    """
    if list(horizons) != sorted(horizons):
        raise ValueError(f"Horizons {list(horizons)} must be ascending")
    return list(_decay_reports(feature, panel, market, horizons, min_names))


def _decay_reports(feature, panel, market, horizons, min_names) -> Iterator[Tuple[int, Optional[ICReport]]]:
    for horizon in horizons:
        rets = forward_returns(market, horizon)
        try:
            yield horizon, ic_summary(daily_ic_series(feature, panel, rets, min_names=min_names))
        except MetricUndefined as err:
            logging.info(f"IC of {feature} undefined at horizon {horizon}: {err}")
            yield horizon, None
