#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy import special

from ..common.numeric import sample_std
from ..tradenv.errors import SharpeUndefined
from ..tradenv.performance import max_drawdown, returns_from_values, sharpe, total_return
from .errors import DegenerateDiffs


@dataclass(frozen=True)
class PairedTestResult:
    t_stat: float
    df: int
    p_value: float
    mean_diff: float
    n: int

    def to_record(self) -> Dict[str, Any]:
        return asdict(self)


def student_t_two_sided_p(t_stat: float, df: int) -> float:
    """
    Two-sided p-value of Student's t, P(|T| >= |t|) = I_x(df / 2, 1 / 2) with x = df / (df + t^2).

    :param t_stat: t statistic.
    :param df: Degrees of freedom (at least 1).
    :return: p in [0, 1].
    """
    if df < 1:
        raise ValueError("Student-t needs df >= 1")
    x = df / (df + t_stat * t_stat)
    return float(min(1.0, max(0.0, special.betainc(df / 2.0, 0.5, x))))


def paired_t(a: Sequence[float], b: Sequence[float]) -> PairedTestResult:
    """
    Paired t-test of ``a`` against ``b``, aligned by position (seed).

    :param a: Per-seed metric of the augmented configuration.
    :param b: Per-seed metric of the reference configuration.
    :return: t statistic, df = n - 1, two-sided p and mean difference.
    """
    if len(a) != len(b):
        raise ValueError(f"Paired samples differ in length: {len(a)} vs {len(b)}")
    if len(a) < 2:
        raise ValueError("A paired t-test needs at least two pairs")
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    std = sample_std(d)
    if std is None:
        raise DegenerateDiffs("Paired differences are constant")
    n = len(d)
    t_stat = float(np.mean(d)) / (std / math.sqrt(n))
    return PairedTestResult(
        t_stat=t_stat, df=n - 1, p_value=student_t_two_sided_p(t_stat, n - 1), mean_diff=float(np.mean(d)), n=n
    )


def safe_sharpe(values: Sequence[float]) -> Optional[float]:
    try:
        return sharpe(returns_from_values(values))
    except SharpeUndefined:
        return None


def mean_std(samples: Sequence[Optional[float]]) -> Dict[str, Optional[float]]:
    """Mean and sample deviation over defined samples; deviation is 0 for a single sample."""
    defined = [s for s in samples if s is not None]
    if not defined:
        return {"mean": None, "std": None, "n": 0}
    std = float(np.std(defined, ddof=1)) if len(defined) > 1 else 0.0
    return {"mean": float(np.mean(defined)), "std": std, "n": len(defined)}


__all__ = [
    "PairedTestResult",
    "max_drawdown",
    "mean_std",
    "paired_t",
    "safe_sharpe",
    "sharpe",
    "student_t_two_sided_p",
    "total_return",
]
