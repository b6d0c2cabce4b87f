#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import bisect
import json
import logging
import os
import threading
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..common.dates import DayRange
from ..common.io import canonical_json
from .calendar import TradingCalendar
from .errors import ParseError, StorageError
from .types import EventBundle, RawItem

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


class BackfillStore:
    """
    Append-only, point-in-time store of raw text items.

    Items are persisted to a single line-delimited log (``items.jsonl``) inside ``directory``; the in-memory index
    is rebuilt from the log on open. Writes are serialized by a lock; readers only ever see immutable per-ticker
    tuples, so bundles handed out are safe to share across threads. Passing ``directory=None`` keeps the store in
    memory.
    """

    LOG_NAME = "items.jsonl"

    def __init__(self, directory: Optional[Union[str, Path]], calendar: TradingCalendar):
        self.calendar = calendar
        self.directory = Path(directory) if directory is not None else None
        self._lock = threading.RLock()
        self._checksums = set()
        self._by_ticker: Dict[str, Tuple[RawItem, ...]] = {}
        self._timestamps: Dict[str, Tuple[datetime, ...]] = {}
        self._access_log: List[Tuple[str, date]] = []
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            self._load()

    @property
    def log_path(self) -> Optional[Path]:
        return self.directory / self.LOG_NAME if self.directory is not None else None

    @property
    def access_log(self) -> List[Tuple[str, date]]:
        """Every (ticker, date) bundle requested since open or the last clear."""
        return list(self._access_log)

    def clear_access_log(self) -> None:
        self._access_log.clear()

    def __len__(self) -> int:
        return len(self._checksums)

    def tickers(self) -> List[str]:
        return sorted(self._by_ticker)

    def _load(self) -> None:
        if not self.log_path.exists():
            return
        items = []
        try:
            with open(self.log_path, encoding="utf-8") as handle:
                for line_no, line in enumerate(handle, start=1):
                    if not line.strip():
                        continue
                    try:
                        items.append(RawItem.from_record(json.loads(line)))
                    except (ValueError, KeyError) as err:
                        raise StorageError(f"Corrupt backfill log {self.log_path} at line {line_no}: {err}") from err
        except OSError as err:
            raise StorageError(f"Unable to read backfill log {self.log_path}: {err}") from err
        self._index(items)
        logging.info(f"Opened backfill store {self.directory} with {len(self._checksums)} items")

    def _index(self, items: Sequence[RawItem]) -> None:
        touched: Dict[str, List[RawItem]] = {}
        for item in items:
            self._checksums.add(item.checksum)
            touched.setdefault(item.ticker, []).append(item)
        for ticker, fresh in touched.items():
            merged = sorted(self._by_ticker.get(ticker, ()) + tuple(fresh), key=lambda item: item.sort_key)
            self._by_ticker[ticker] = tuple(merged)
            self._timestamps[ticker] = tuple(item.published_at for item in merged)

    def put_items(self, items: Iterable[RawItem]) -> int:
        """
        Persist items, silently skipping any whose checksum is already stored (or repeated within the call).

        :param items: Items to insert.
        :return: Number of newly persisted items.
        """
        with self._lock:
            fresh: List[RawItem] = []
            seen = set()
            for item in items:
                if item.checksum in self._checksums or item.checksum in seen:
                    continue
                seen.add(item.checksum)
                fresh.append(item)
            if not fresh:
                return 0
            if self.log_path is not None:
                try:
                    with open(self.log_path, "a", encoding="utf-8") as handle:
                        handle.write("".join(canonical_json(item.to_record()) + "\n" for item in fresh))
                        handle.flush()
                        os.fsync(handle.fileno())
                except OSError as err:
                    raise StorageError(f"Unable to append to backfill log {self.log_path}: {err}") from err
            self._index(fresh)
            logging.debug(f"Persisted {len(fresh)} new items")
            return len(fresh)

    def build_bundle(self, ticker: str, day: date) -> EventBundle:
        """
        Build the bundle for one ticker and trading day. The bundle window is (previous trading day's close, this
        day's close]; anything published after the close belongs to the next day's bundle.

        :param ticker: Ticker symbol.
        :param day: Trading day.
        :return: The bundle, possibly with no items.
        """
        boundary = self.calendar.close_utc(day)
        previous = self.calendar.previous_day(day)
        lower = self.calendar.close_utc(previous) if previous is not None else EPOCH
        self._access_log.append((ticker, day))
        items = self._by_ticker.get(ticker, ())
        stamps = self._timestamps.get(ticker, ())
        lo = bisect.bisect_right(stamps, lower) if previous is not None else 0
        hi = bisect.bisect_right(stamps, boundary)
        return EventBundle(ticker=ticker, date=day, items=items[lo:hi], boundary=boundary)

    def query_bundles(self, universe: Sequence[str], window: DayRange) -> List[EventBundle]:
        """
        One bundle per (trading day, ticker) in the window, date-major then ticker lexicographic.

        :param universe: Tickers to include.
        :param window: Inclusive day range; non-trading days produce no bundles.
        :return: Bundles in deterministic order.
        """
        tickers = sorted(set(universe))
        return [self.build_bundle(ticker, day) for day in self.calendar.days_between(window) for ticker in tickers]

    def import_replay(self, path: Union[str, Path]) -> int:
        """
        Import a line-delimited replay file. Records are validated in order; on the first malformed line the valid
        prefix is committed and a ParseError carrying the line number is raised.

        :param path: Replay file (UTF-8 JSON lines).
        :return: Number of newly persisted items.
        """
        parsed: List[RawItem] = []
        failure: Optional[ParseError] = None
        try:
            with open(path, encoding="utf-8") as handle:
                for line_no, line in enumerate(handle, start=1):
                    if not line.strip():
                        continue
                    try:
                        parsed.append(RawItem.from_record(json.loads(line)))
                    except (ValueError, KeyError, TypeError) as err:
                        failure = ParseError(line_no, str(err))
                        break
        except OSError as err:
            raise StorageError(f"Unable to read replay file {path}: {err}") from err
        inserted = self.put_items(parsed)
        logging.info(f"Imported {inserted} new items from {path}")
        if failure is not None:
            raise failure
        return inserted
