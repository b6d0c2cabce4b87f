#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import math
from typing import Optional, Sequence

import numpy as np

RELATIVE_SPREAD_FLOOR = 1e-12


def sample_std(values: Sequence[float]) -> Optional[float]:
    """
    Sample (n - 1) standard deviation, or None when the series has no usable spread.

    A series counts as constant when its range is zero or its deviation is below ``1e-12 * max(1, |mean|)``.
    Rounding in ``np.std`` leaves a residue of order 1e-17 on constant series such as ``[0.1] * 3``, so an exact
    zero comparison is not enough.

    :param values: At least two observations.
    :return: The deviation, or None for constant, too-short or non-finite input.
    """
    v = np.asarray(values, dtype=float)
    if len(v) < 2 or np.ptp(v) == 0.0:
        return None
    std = float(np.std(v, ddof=1))
    if not math.isfinite(std) or std <= RELATIVE_SPREAD_FLOOR * max(1.0, abs(float(np.mean(v)))):
        return None
    return std
