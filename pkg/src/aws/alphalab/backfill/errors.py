#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from typing import Optional

from ..common.errors import AlphaLabError


class StorageError(AlphaLabError):
    """Raised when the backfill log cannot be read or written."""


class UnknownTradingDay(AlphaLabError, KeyError):
    """Raised when a date is not part of the trading calendar."""


class ParseError(AlphaLabError, ValueError):
    """Raised when a replay record is malformed. Carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SourceError(AlphaLabError):
    """Base class of source adapter failures."""


class NetworkError(SourceError):
    pass


class AuthError(SourceError):
    pass


class RateLimited(SourceError):
    def __init__(self, message: str, retry_after: Optional[float] = None):
        super().__init__(message)
        self.retry_after = retry_after
