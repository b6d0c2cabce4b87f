#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import logging
from dataclasses import asdict, dataclass
from datetime import date
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..common.io import write_csv
from ..synthmarket.types import MarketData
from ..tradenv.errors import SharpeUndefined
from ..tradenv.performance import sharpe
from .errors import EmptyRegime

DEFAULT_VIX_THRESHOLD = 20.0
HIGH_VOL = "high_vol"
LOW_VOL = "low_vol"
REGIME_HEADER = ("config", "regime", "n_days", "mean_return", "std_return", "sharpe")


@dataclass(frozen=True)
class RegimeRow:
    config: str
    regime: str
    n_days: int
    mean_return: Optional[float]
    std_return: Optional[float]
    sharpe: Optional[float]

    def to_record(self) -> Dict[str, Any]:
        return asdict(self)


def _regime_sharpe(returns: np.ndarray) -> Optional[float]:
    try:
        return sharpe(returns)
    except SharpeUndefined:
        return None


def classify_days(days: Sequence[date], vix: Mapping[date, float], threshold: float = DEFAULT_VIX_THRESHOLD) -> List[str]:
    missing = [d for d in days if d not in vix]
    if missing:
        raise ValueError(f"No VIX level for {missing[0]}")
    return [HIGH_VOL if vix[d] >= threshold else LOW_VOL for d in days]


def regime_split(
    curves: Mapping[str, Sequence[Tuple[date, float]]],
    vix: Mapping[date, float],
    threshold: float = DEFAULT_VIX_THRESHOLD,
    strict: bool = True,
) -> List[RegimeRow]:
    """
    Split each equity curve's daily returns by the VIX level on the return's day and summarize each regime.

    :param curves: Equity curve per configuration, aligned by date.
    :param vix: VIX level per date.
    :param threshold: Days with VIX at or above it are high-vol.
    :param strict: Raise EmptyRegime when a regime has fewer than two days; otherwise emit the row without
        statistics.
    :return: One row per (configuration, regime), high-vol first.
    """
    rows = []
    for config, curve in curves.items():
        days = [d for d, _ in curve][1:]
        values = np.array([v for _, v in curve], dtype=float)
        returns = values[1:] / values[:-1] - 1.0
        labels = np.array(classify_days(days, vix, threshold))
        for regime in (HIGH_VOL, LOW_VOL):
            r = returns[labels == regime]
            if len(r) < 2:
                if strict:
                    raise EmptyRegime(f"{config}: {regime} regime has {len(r)} day(s) at VIX threshold {threshold}")
                logging.warning(f"{config}: {regime} regime has {len(r)} day(s), statistics omitted")
                rows.append(RegimeRow(config, regime, len(r), None, None, None))
                continue
            rows.append(
                RegimeRow(config, regime, len(r), float(np.mean(r)), float(np.std(r, ddof=1)), _regime_sharpe(r))
            )
    return rows


def regime_deltas(rows: Sequence[RegimeRow], reference: str = "baseline") -> Dict[str, Dict[str, Optional[float]]]:
    """Sharpe difference of every configuration against ``reference`` within each regime."""
    by_key = {(row.config, row.regime): row.sharpe for row in rows}
    deltas: Dict[str, Dict[str, Optional[float]]] = {}
    for (config, regime), value in by_key.items():
        if config == reference:
            continue
        ref = by_key.get((reference, regime))
        deltas.setdefault(config, {})[regime] = None if value is None or ref is None else value - ref
    return deltas


def write_regime_csv(path: Union[str, Path], rows: Sequence[RegimeRow]) -> Path:
    return write_csv(
        path, REGIME_HEADER, [(r.config, r.regime, r.n_days, r.mean_return, r.std_return, r.sharpe) for r in rows]
    )


def vix_levels(market: MarketData) -> Dict[date, float]:
    return {d: market.macro_series[d].vix for d in market.dates}
