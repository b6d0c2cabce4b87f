#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass, field
from datetime import date, datetime
from enum import auto
from typing import Any, Dict, Tuple

from ..common.dates import format_timestamp, parse_date, parse_timestamp
from ..common.enums import AutoStringEnum
from ..common.io import canonical_json, content_hash

RECORD_KEYS = ("source_id", "ticker", "published_at", "kind", "headline", "body")


class ItemKind(str, AutoStringEnum):
    """
    Provides enumeration of raw text item kinds.

    :cvar news: News article or wire headline.
    :cvar filing: Regulatory filing.
    :cvar insider_trade: Insider transaction report.
    :cvar options_flow: Unusual options activity.
    """

    news = auto()
    filing = auto()
    insider_trade = auto()
    options_flow = auto()


@dataclass(frozen=True)
class RawItem:
    """
    A single text item attributed to one ticker. The checksum is derived from the content fields and is the
    identity used for de-duplication.
    """

    source_id: str
    ticker: str
    published_at: datetime
    kind: ItemKind
    headline: str
    body: str
    checksum: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "published_at", parse_timestamp(self.published_at))
        object.__setattr__(self, "kind", ItemKind(self.kind))
        object.__setattr__(
            self,
            "checksum",
            content_hash(self.source_id, self.ticker, format_timestamp(self.published_at), self.headline, self.body),
        )

    @property
    def sort_key(self) -> Tuple[datetime, str]:
        return self.published_at, self.checksum

    def to_record(self) -> Dict[str, Any]:
        return {
            "source_id": self.source_id,
            "ticker": self.ticker,
            "published_at": format_timestamp(self.published_at),
            "kind": self.kind.value,
            "headline": self.headline,
            "body": self.body,
        }

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> "RawItem":
        """
        Build an item from a replay/adapter record.

        :param record: Mapping with the replay keys.
        :return: The validated item.
        """
        if not isinstance(record, dict):
            raise ValueError("record is not a JSON object")
        missing = [key for key in RECORD_KEYS if key not in record]
        if missing:
            raise ValueError(f"missing keys {missing}")
        for key in ("source_id", "ticker", "headline", "body", "kind", "published_at"):
            if not isinstance(record[key], str):
                raise ValueError(f"field {key} must be a string")
        if not record["ticker"]:
            raise ValueError("empty ticker")
        return cls(
            source_id=record["source_id"],
            ticker=record["ticker"],
            published_at=parse_timestamp(record["published_at"]),
            kind=ItemKind(record["kind"]),
            headline=record["headline"],
            body=record["body"],
        )


@dataclass(frozen=True)
class EventBundle:
    """All items for one (ticker, trading day) up to that day's close."""

    ticker: str
    date: date
    items: Tuple[RawItem, ...]
    boundary: datetime

    def __post_init__(self):
        object.__setattr__(self, "date", parse_date(self.date))
        object.__setattr__(self, "items", tuple(sorted(self.items, key=lambda item: item.sort_key)))
        checksums = [item.checksum for item in self.items]
        if len(set(checksums)) != len(checksums):
            raise ValueError(f"Duplicate items in bundle {self.ticker} {self.date}")
        late = [item for item in self.items if item.published_at > self.boundary]
        if late:
            raise ValueError(f"{len(late)} items in bundle {self.ticker} {self.date} are past the information boundary")

    @property
    def is_empty(self) -> bool:
        return not self.items

    @property
    def key(self) -> Tuple[date, str]:
        return self.date, self.ticker

    @property
    def content_hash(self) -> str:
        return content_hash(self.ticker, self.date.isoformat(), *[item.checksum for item in self.items])

    def to_record(self) -> Dict[str, Any]:
        return {
            "ticker": self.ticker,
            "date": self.date.isoformat(),
            "boundary": format_timestamp(self.boundary),
            "items": [item.to_record() for item in self.items],
        }

    def to_json(self) -> str:
        return canonical_json(self.to_record())
