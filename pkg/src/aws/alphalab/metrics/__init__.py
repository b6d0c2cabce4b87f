#  Copyright 2024 Amazon.com, Inc. or its affiliates.

# flake8: noqa
from .errors import DegenerateInput, EmptySeries, HorizonError, MetricUndefined, NoSignal
from .ic import ICReport, ICSeries, daily_ic_series, ic_decay, ic_summary, spearman, t_stat_from_ir
from .returns import ReturnPanel, forward_returns
from .quality import (
    CompositeWeights,
    SignalMetrics,
    bucket_sizes,
    brier,
    composite,
    compute_signal_metrics,
    hit_rate,
    quintile_spread,
    signal_coverage,
)
from .tables import (
    ALL_FEATURES,
    FeatureDistributionRow,
    FeatureICRow,
    feature_distribution,
    feature_ic_table,
    write_decay_csv,
    write_distribution_csv,
    write_feature_ic_csv,
    write_ic_series_csv,
)
