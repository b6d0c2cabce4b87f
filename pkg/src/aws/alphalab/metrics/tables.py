#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..common.io import write_csv
from ..extract.types import MACRO_FIELDS, STOCK_FIELDS, FeaturePanel
from .errors import MetricUndefined
from .ic import DEFAULT_MIN_NAMES, ICReport, ICSeries, daily_ic_series, ic_summary
from .returns import ReturnPanel

ALL_FEATURES = STOCK_FIELDS + MACRO_FIELDS


@dataclass(frozen=True)
class FeatureICRow:
    """One row of the feature IC table; statistics are None when the feature's cross-sectional IC is undefined."""

    feature: str
    ic_mean: Optional[float]
    ic_ir: Optional[float]
    t_stat: Optional[float]
    pct_positive: Optional[float]
    n: int


@dataclass(frozen=True)
class FeatureDistributionRow:
    feature: str
    mean: float
    std: float
    min: float
    max: float
    pct_nonzero: float


def feature_ic_table(
    panel: FeaturePanel,
    rets: ReturnPanel,
    features: Sequence[str] = ALL_FEATURES,
    min_names: int = DEFAULT_MIN_NAMES,
) -> List[FeatureICRow]:
    """
    Per-feature IC statistics at the horizon of ``rets``. Macro features are constant across tickers, so their
    cross-sectional IC is undefined every day and their rows carry no statistics.
    """
    rows = []
    for feature in features:
        try:
            series = daily_ic_series(feature, panel, rets, min_names=min_names)
        except MetricUndefined:
            rows.append(FeatureICRow(feature, None, None, None, None, 0))
            continue
        try:
            report = ic_summary(series)
        except MetricUndefined:
            rows.append(FeatureICRow(feature, None, None, None, None, len(series)))
            continue
        rows.append(FeatureICRow(feature, report.ic_mean, report.ic_ir, report.t_stat, report.pct_positive, report.n_days))
    return rows


def feature_distribution(panel: FeaturePanel, features: Sequence[str] = ALL_FEATURES) -> List[FeatureDistributionRow]:
    """Mean, population deviation, range and share of non-zero cells for each feature over the whole panel."""
    rows = []
    for feature in features:
        values = panel.feature_matrix(feature).ravel()
        if values.size == 0:
            raise ValueError("Feature distribution of an empty panel is undefined")
        rows.append(
            FeatureDistributionRow(
                feature=feature,
                mean=float(np.mean(values)),
                std=float(np.std(values)),
                min=float(np.min(values)),
                max=float(np.max(values)),
                pct_nonzero=float(np.mean(values != 0.0)),
            )
        )
    return rows


def write_ic_series_csv(path: Union[str, Path], series: ICSeries) -> Path:
    return write_csv(path, ("date", "ic"), [(day.isoformat(), float(ic)) for day, ic in series])


def write_decay_csv(path: Union[str, Path], decay: Sequence[Tuple[int, Optional[ICReport]]]) -> Path:
    rows = []
    for horizon, report in decay:
        if report is None:
            rows.append((horizon, None, None, None, 0))
        else:
            rows.append((horizon, report.ic_mean, report.ic_ir, report.t_stat, report.n_days))
    return write_csv(path, ("horizon", "ic_mean", "ic_ir", "t_stat", "n"), rows)


def write_feature_ic_csv(path: Union[str, Path], rows: Sequence[FeatureICRow]) -> Path:
    return write_csv(
        path,
        ("feature", "ic_mean", "ic_ir", "t_stat", "pct_positive", "n"),
        [(r.feature, r.ic_mean, r.ic_ir, r.t_stat, r.pct_positive, r.n) for r in rows],
    )


def write_distribution_csv(path: Union[str, Path], rows: Sequence[FeatureDistributionRow]) -> Path:
    return write_csv(
        path,
        ("feature", "mean", "std", "min", "max", "pct_nonzero"),
        [(r.feature, r.mean, r.std, r.min, r.max, r.pct_nonzero) for r in rows],
    )
