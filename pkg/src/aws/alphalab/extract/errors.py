#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from ..common.errors import AlphaLabError


class TemplateError(AlphaLabError, ValueError):
    """Raised when a prompt template is missing a placeholder or repeats one."""


class SchemaError(AlphaLabError, ValueError):
    """Raised when an extractor reply holds no JSON object or a required field is missing or non-numeric."""


class ExtractorError(AlphaLabError):
    """Raised when the extractor back end cannot produce a reply after the bounded retries."""


class PanelError(AlphaLabError):
    """Raised when a feature panel cannot be assembled, e.g. the failure rate exceeds its ceiling."""
