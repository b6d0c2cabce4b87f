#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from ..common.errors import AlphaLabError


class HorizonError(AlphaLabError, ValueError):
    """Raised when a forward-return horizon is not shorter than the sample."""


class MetricUndefined(AlphaLabError):
    """Base of the errors meaning "this metric has no value on these inputs"."""


class DegenerateInput(MetricUndefined):
    """Raised when an input is constant or too short for the statistic."""


class EmptySeries(MetricUndefined):
    """Raised when no day qualifies for a daily statistic."""


class NoSignal(MetricUndefined):
    """Raised when no cell carries a directional signal."""
