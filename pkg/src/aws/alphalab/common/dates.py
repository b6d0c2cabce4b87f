#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass
from datetime import date, datetime, time, timezone
from typing import Union
from zoneinfo import ZoneInfo

from .errors import ConfigError

MARKET_TIMEZONE = ZoneInfo("America/New_York")
MARKET_CLOSE = time(16, 0)


def parse_date(value: Union[str, date]) -> date:
    """
    Parse an ISO calendar date.

    :param value: ISO string (YYYY-MM-DD) or an existing date.
    :return: The parsed date.
    """
    if isinstance(value, datetime):
        return value.date()
    if isinstance(value, date):
        return value
    return date.fromisoformat(str(value).strip())


def parse_timestamp(value: Union[str, datetime]) -> datetime:
    """
    Parse an RFC 3339 timestamp into an aware UTC datetime. Naive timestamps are rejected because the
    information boundary cannot be evaluated without an offset.

    :param value: RFC 3339 text (a trailing Z is accepted) or an aware datetime.
    :return: The timestamp converted to UTC.
    """
    if isinstance(value, datetime):
        parsed = value
    else:
        text = str(value).strip()
        if text.endswith("Z") or text.endswith("z"):
            text = text[:-1] + "+00:00"
        parsed = datetime.fromisoformat(text)
    if parsed.tzinfo is None or parsed.utcoffset() is None:
        raise ValueError(f"Timestamp {value!r} has no UTC offset")
    return parsed.astimezone(timezone.utc)


def format_timestamp(value: datetime) -> str:
    return value.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def market_close_utc(day: date) -> datetime:
    """
    Return the information boundary of a trading day: 16:00 US-Eastern converted to UTC for that date,
    so daylight saving transitions are honoured.

    :param day: Trading day.
    :return: Aware UTC datetime of the close.
    """
    return datetime.combine(day, MARKET_CLOSE, tzinfo=MARKET_TIMEZONE).astimezone(timezone.utc)


@dataclass(frozen=True)
class DayRange:
    """Inclusive calendar day range."""

    start: date
    end: date

    def __post_init__(self):
        if self.start > self.end:
            raise ConfigError(f"Day range start {self.start} is after end {self.end}")

    @classmethod
    def parse(cls, start: Union[str, date], end: Union[str, date]) -> "DayRange":
        return cls(parse_date(start), parse_date(end))

    def contains(self, day: date) -> bool:
        return self.start <= day <= self.end

    def overlaps(self, other: "DayRange") -> bool:
        return self.start <= other.end and other.start <= self.end

    def __str__(self) -> str:
        return f"{self.start.isoformat()}..{self.end.isoformat()}"
