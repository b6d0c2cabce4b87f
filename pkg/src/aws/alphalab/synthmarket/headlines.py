#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import json
from datetime import datetime, time, timezone
from pathlib import Path
from typing import Iterable, List, Sequence, Union

from ..backfill.types import ItemKind, RawItem
from ..common.dates import MARKET_TIMEZONE
from ..common.io import atomic_write_text, canonical_json
from ..extract.oracle import decode_event_headline, format_event_body, format_event_headline
from .types import HiddenEvent

SOURCE_ID = "synthmarket"
# Midday US-Eastern, safely inside the event day's bundle window.
PUBLISH_TIME = time(12, 0)


def pseudo_headlines(events: Sequence[HiddenEvent]) -> List[RawItem]:
    """
    One templated news item per event, stamped at noon US-Eastern on the event date so it lands in that day's
    bundle. The headline carries direction, strength and ticker; the body carries horizon and drift.

    :param events: Hidden events.
    :return: Items ready for :meth:`BackfillStore.put_items`.
    """
    items = []
    for event in events:
        published = datetime.combine(event.date, PUBLISH_TIME, tzinfo=MARKET_TIMEZONE).astimezone(timezone.utc)
        items.append(
            RawItem(
                source_id=SOURCE_ID,
                ticker=event.ticker,
                published_at=published,
                kind=ItemKind.news,
                headline=format_event_headline(event.true_alpha_direction, event.strength, event.ticker),
                body=format_event_body(event.horizon_days, event.alpha_per_day),
            )
        )
    return items


def events_from_items(items: Iterable[RawItem]) -> List[HiddenEvent]:
    """Recover hidden events from synthetic headlines; unrelated items are ignored."""
    events = []
    for item in items:
        decoded = decode_event_headline(item.headline, item.body)
        if decoded is None:
            continue
        event_date = item.published_at.astimezone(MARKET_TIMEZONE).date()
        events.append(
            HiddenEvent(
                ticker=decoded.ticker,
                date=event_date,
                true_alpha_direction=decoded.true_alpha_direction,
                strength=decoded.strength,
                horizon_days=decoded.horizon_days,
                alpha_per_day=decoded.alpha_per_day,
            )
        )
    return sorted(events, key=lambda e: (e.date, e.ticker))


def write_events_jsonl(path: Union[str, Path], events: Sequence[HiddenEvent]) -> Path:
    return atomic_write_text(path, "".join(canonical_json(event.to_record()) + "\n" for event in events))


def read_events_jsonl(path: Union[str, Path]) -> List[HiddenEvent]:
    with open(path, encoding="utf-8") as handle:
        return [HiddenEvent.from_record(json.loads(line)) for line in handle if line.strip()]


def write_replay_jsonl(path: Union[str, Path], items: Sequence[RawItem]) -> Path:
    """Write items in the backfill replay format."""
    return atomic_write_text(path, "".join(canonical_json(item.to_record()) + "\n" for item in items))
