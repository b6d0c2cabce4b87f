#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from typing import Any, Dict, Optional

from ..common.errors import AlphaLabError


class LengthMismatch(AlphaLabError, ValueError):
    """Raised when rollout sequences are not aligned step for step."""


class NonFiniteLoss(AlphaLabError):
    """Raised when a PPO loss or gradient is not finite; the update is abandoned and ``diagnostics`` describe it."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
