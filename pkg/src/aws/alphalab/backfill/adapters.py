#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import json
import logging
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass
from datetime import timedelta
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import boto3
import toml
from botocore.exceptions import BotoCoreError, ClientError, EndpointConnectionError
from requests import RequestException, Session

from ..common.dates import DayRange
from ..common.errors import ConfigError
from .errors import AuthError, NetworkError, RateLimited
from .types import RawItem


@dataclass(frozen=True)
class AdapterConfig:
    """
    Connection settings of a source adapter. The credential itself never lives in the file, only the name of the
    environment variable that holds it.
    """

    endpoint: str
    token_env: Optional[str] = None
    poll_window_days: int = 1
    timeout_sec: float = 30.0

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "AdapterConfig":
        try:
            values = toml.load(path)
        except (OSError, toml.TomlDecodeError) as err:
            raise ConfigError(f"Unable to read adapter config {path}: {err}") from err
        return cls.from_dict(values)

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "AdapterConfig":
        unknown = set(values) - {"endpoint", "token_env", "poll_window_days", "timeout_sec"}
        if unknown:
            raise ConfigError(f"Unknown adapter config keys: {sorted(unknown)}")
        if not values.get("endpoint"):
            raise ConfigError("Adapter config requires an endpoint")
        config = cls(**values)
        if config.poll_window_days < 1:
            raise ConfigError("poll_window_days must be >= 1")
        return config

    def token(self) -> Optional[str]:
        if not self.token_env:
            return None
        value = os.environ.get(self.token_env)
        if not value:
            raise AuthError(f"Environment variable {self.token_env} holding the source credential is not set")
        return value


class SourceAdapter(ABC):
    """A read-only source of raw items. Adapters normalize records into RawItems and never write to the store."""

    @abstractmethod
    def fetch(self, window: DayRange) -> List[RawItem]:
        """
        Fetch every item published within the window.

        :param window: Inclusive day range.
        :return: Normalized items.
        """


class MockAdapter(SourceAdapter):
    """Serves canned records; used for tests and offline demos."""

    def __init__(self, records: Iterable[Union[RawItem, Dict[str, Any]]]):
        self.records = [record if isinstance(record, RawItem) else RawItem.from_record(record) for record in records]
        self.calls = 0

    def fetch(self, window: DayRange) -> List[RawItem]:
        self.calls += 1
        return [record for record in self.records if window.contains(record.published_at.date())]


class HttpSourceAdapter(SourceAdapter):
    """
    Pulls JSON records from an HTTP endpoint, one request per poll window. The endpoint receives ``start`` and
    ``end`` query parameters and replies with a JSON list (or an object with an ``items`` list) of replay records.
    """

    def __init__(self, config: AdapterConfig, session: Optional[Session] = None):
        self.config = config
        self.session = session or Session()

    def _get(self, start: str, end: str) -> List[Dict[str, Any]]:
        headers = {}
        token = self.config.token()
        if token:
            headers["Authorization"] = f"Bearer {token}"
        try:
            res = self.session.get(
                self.config.endpoint, params={"start": start, "end": end}, headers=headers, timeout=self.config.timeout_sec
            )
        except RequestException as err:
            raise NetworkError(f"Request to {self.config.endpoint} failed: {err}") from err
        if res.status_code in (401, 403):
            raise AuthError(f"Source {self.config.endpoint} rejected credentials (HTTP {res.status_code})")
        if res.status_code == 429:
            retry_after = res.headers.get("Retry-After")
            raise RateLimited(
                f"Source {self.config.endpoint} is rate limiting requests",
                retry_after=float(retry_after) if retry_after and retry_after.replace(".", "", 1).isdigit() else None,
            )
        if res.status_code >= 400:
            raise NetworkError(f"Source {self.config.endpoint} returned HTTP {res.status_code}")
        try:
            payload = res.json()
        except ValueError as err:
            raise NetworkError(f"Source {self.config.endpoint} returned a non-JSON body") from err
        return payload.get("items", []) if isinstance(payload, dict) else payload

    def fetch(self, window: DayRange) -> List[RawItem]:
        items: List[RawItem] = []
        start = window.start
        step = timedelta(days=self.config.poll_window_days)
        while start <= window.end:
            end = min(start + step - timedelta(days=1), window.end)
            records = self._get(start.isoformat(), end.isoformat())
            items.extend(RawItem.from_record(record) for record in records)
            start = end + timedelta(days=1)
        return items


class S3ReplayAdapter(SourceAdapter):
    """
    Reads replay archives stored as one JSON-lines object per day: ``s3://{bucket}/{prefix}{YYYY-MM-DD}.jsonl``.
    Missing days are treated as days without content.
    """

    def __init__(self, bucket: str, prefix: str = "", s3_client: Any = None):
        self.bucket = bucket
        self.prefix = prefix
        self.s3_client = s3_client or boto3.client("s3")

    def fetch(self, window: DayRange) -> List[RawItem]:
        items: List[RawItem] = []
        day = window.start
        while day <= window.end:
            key = f"{self.prefix}{day.isoformat()}.jsonl"
            try:
                body = self.s3_client.get_object(Bucket=self.bucket, Key=key)["Body"].read().decode("utf-8")
            except ClientError as err:
                code = err.response.get("Error", {}).get("Code", "")
                if code in ("NoSuchKey", "404"):
                    logging.debug(f"No replay object s3://{self.bucket}/{key}")
                    day += timedelta(days=1)
                    continue
                if code in ("AccessDenied", "InvalidAccessKeyId", "SignatureDoesNotMatch", "ExpiredToken"):
                    raise AuthError(f"Access to s3://{self.bucket}/{key} denied: {code}") from err
                if code in ("SlowDown", "Throttling", "ThrottlingException", "RequestLimitExceeded"):
                    raise RateLimited(f"S3 throttled request for s3://{self.bucket}/{key}") from err
                raise NetworkError(f"S3 request for s3://{self.bucket}/{key} failed: {code}") from err
            except (EndpointConnectionError, BotoCoreError) as err:
                raise NetworkError(f"S3 request for s3://{self.bucket}/{key} failed: {err}") from err
            items.extend(RawItem.from_record(json.loads(line)) for line in body.splitlines() if line.strip())
            day += timedelta(days=1)
        return items


def fetch_source(adapter: SourceAdapter, window: DayRange) -> List[RawItem]:
    """
    Fetch normalized items from an adapter, ordered by (published_at, checksum). Nothing is written to the store.

    :param adapter: Configured source adapter.
    :param window: Inclusive day range.
    :return: Items in deterministic order.
    """
    items = sorted(adapter.fetch(window), key=lambda item: item.sort_key)
    logging.info(f"Fetched {len(items)} items from {type(adapter).__name__} for {window}")
    return items
