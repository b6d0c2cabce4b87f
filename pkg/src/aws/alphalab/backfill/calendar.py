#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import bisect
import csv
from datetime import date, datetime
from pathlib import Path
from typing import Iterable, List, Optional, Union

from ..common.dates import DayRange, market_close_utc, parse_date
from .errors import UnknownTradingDay

DEFAULT_CALENDAR = Path(__file__).resolve().parent.parent / "data" / "calendar_2023_2025.csv"


class TradingCalendar:
    """
    Ordered set of trading days. Each day's information boundary is its 16:00 US-Eastern close.
    """

    def __init__(self, days: Iterable[Union[str, date]]):
        self.days: List[date] = sorted({parse_date(day) for day in days})
        self._index = {day: i for i, day in enumerate(self.days)}

    @classmethod
    def from_csv(cls, path: Union[str, Path] = DEFAULT_CALENDAR) -> "TradingCalendar":
        """
        Load a calendar from a CSV of ISO dates. A header row (any non-date first cell) is skipped.

        :param path: CSV file path.
        :return: The calendar.
        """
        days = []
        with open(path, newline="", encoding="utf-8") as handle:
            for row in csv.reader(handle):
                if not row or not row[0].strip():
                    continue
                try:
                    days.append(parse_date(row[0]))
                except ValueError:
                    if days:
                        raise
        return cls(days)

    def to_csv_text(self) -> str:
        return "date\n" + "".join(f"{day.isoformat()}\n" for day in self.days)

    def __contains__(self, day: date) -> bool:
        return day in self._index

    def __len__(self) -> int:
        return len(self.days)

    def index_of(self, day: date) -> int:
        try:
            return self._index[day]
        except KeyError:
            raise UnknownTradingDay(f"{day} is not a trading day") from None

    def close_utc(self, day: date) -> datetime:
        self.index_of(day)
        return market_close_utc(day)

    def previous_day(self, day: date) -> Optional[date]:
        i = self.index_of(day)
        return self.days[i - 1] if i > 0 else None

    def days_between(self, window: DayRange) -> List[date]:
        lo = bisect.bisect_left(self.days, window.start)
        hi = bisect.bisect_right(self.days, window.end)
        return self.days[lo:hi]
