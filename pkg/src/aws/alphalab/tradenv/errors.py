#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from ..common.errors import AlphaLabError


class WarmupError(AlphaLabError, ValueError):
    """Raised when there is not enough price history before the episode start for the indicators."""


class RangeError(AlphaLabError, ValueError):
    """Raised when an episode range is not covered by the market or feature data."""


class SteppedAfterDone(AlphaLabError):
    """Raised when step is called on a finished episode."""


class WidthMismatch(AlphaLabError, ValueError):
    """Raised when an observation does not match the normalizer width."""


class SharpeUndefined(AlphaLabError, ValueError):
    """Raised when a return series has fewer than two points or zero dispersion."""
