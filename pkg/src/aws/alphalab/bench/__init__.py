#  Copyright 2024 Amazon.com, Inc. or its affiliates.

# flake8: noqa
from .ablation import (
    DEFAULT_CONFIGS,
    DEFAULT_SEEDS,
    AblationCell,
    AblationResults,
    AblationSpec,
    CellOutcome,
    format_ablation_table,
    run_ablation,
    run_cell,
    write_results_csv,
)
from .baselines import buy_and_hold, snap_range
from .costs import DEFAULT_COST_LEVELS, CostRow, CostSweep, cost_sweep
from .errors import DegenerateDiffs, EmptyRegime, UnknownTicker
from .regime import (
    DEFAULT_VIX_THRESHOLD,
    HIGH_VOL,
    LOW_VOL,
    RegimeRow,
    classify_days,
    regime_deltas,
    regime_split,
    vix_levels,
    write_regime_csv,
)
from .report import mean_equity_curves, write_ablation_figures, write_convergence_csv, write_equity_curves_csv
from .results import RESULTS_HEADER, RunResult
from .stats import (
    PairedTestResult,
    max_drawdown,
    mean_std,
    paired_t,
    safe_sharpe,
    sharpe,
    student_t_two_sided_p,
    total_return,
)
