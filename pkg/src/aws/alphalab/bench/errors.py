#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from ..common.errors import AlphaLabError


class DegenerateDiffs(AlphaLabError, ValueError):
    """Raised when paired differences have zero spread, so the t statistic is undefined."""


class UnknownTicker(AlphaLabError, KeyError):
    pass


class EmptyRegime(AlphaLabError, ValueError):
    """Raised when a volatility regime holds fewer than two days."""
