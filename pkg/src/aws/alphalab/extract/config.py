#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass, fields
from typing import Any, Mapping, Optional

from ..common.errors import ConfigError

EXTRACTOR_KINDS = ("oracle", "remote")


@dataclass
class ExtractorConfig:
    """
    Settings of the ``[extractor]`` section.

    :param kind: ``oracle`` (synthetic, deterministic) or ``remote`` (HTTP chat-completion endpoint).
    :param endpoint: URL of the remote extractor.
    :param model: Model name sent with each request.
    :param api_key_env: Environment variable holding the API key.
    :param timeout_sec: Per-request timeout.
    :param max_attempts: Attempts per bundle before giving up.
    :param backoff_s: First retry delay; doubles on each further retry.
    :param max_in_flight: Concurrent extractions in a panel.
    :param rate_per_sec: Optional token-bucket rate limit on client calls.
    :param failure_ceiling: Panel failure rate above which the panel is rejected.
    :param noise_sigma: Gaussian noise of the oracle extractor.
    :param seed: Seed of the oracle noise streams.
    """

    kind: str = "oracle"
    endpoint: str = ""
    model: str = ""
    api_key_env: str = "ALPHALAB_LLM_API_KEY"
    timeout_sec: float = 60.0
    max_attempts: int = 3
    backoff_s: float = 1.0
    max_in_flight: int = 8
    rate_per_sec: Optional[float] = None
    failure_ceiling: float = 0.2
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in EXTRACTOR_KINDS:
            raise ConfigError(f"extractor.kind must be one of {EXTRACTOR_KINDS}, got {self.kind!r}")
        if self.kind == "remote" and not self.endpoint:
            raise ConfigError("extractor.endpoint is required for the remote extractor")
        if self.max_attempts < 1 or self.max_in_flight < 1:
            raise ConfigError("extractor.max_attempts and extractor.max_in_flight must be at least 1")
        if self.backoff_s < 0 or self.noise_sigma < 0 or self.timeout_sec <= 0:
            raise ConfigError("extractor.backoff_s and noise_sigma must be >= 0, timeout_sec > 0")
        if not 0.0 <= self.failure_ceiling <= 1.0:
            raise ConfigError("extractor.failure_ceiling must lie in [0, 1]")
        if self.rate_per_sec is not None and self.rate_per_sec <= 0:
            raise ConfigError("extractor.rate_per_sec must be positive")

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "ExtractorConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"Unknown [extractor] keys: {sorted(unknown)}")
        return cls(**values)
