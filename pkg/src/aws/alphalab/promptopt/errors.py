#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from ..common.errors import AlphaLabError


class ProposerExhausted(AlphaLabError):
    """Raised when a scripted proposer has no templates left."""


class PreconditionError(AlphaLabError):
    """Raised when an operation is applied to a candidate in the wrong state."""


class NoPass(AlphaLabError):
    """Raised when no candidate in the ledger passes every adequacy gate."""

    def __init__(self, message: str, best=None, ledger=()):
        super().__init__(message)
        self.best = best
        self.ledger = list(ledger)
