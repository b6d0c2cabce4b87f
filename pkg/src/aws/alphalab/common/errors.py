#  Copyright 2024 Amazon.com, Inc. or its affiliates.


class AlphaLabError(Exception):
    """Root of every error raised by the pipeline."""


class ConfigError(AlphaLabError, ValueError):
    """Raised when a configuration value is missing, out of range or inconsistent."""


class UsageError(AlphaLabError):
    """Raised when the command line is used incorrectly."""
