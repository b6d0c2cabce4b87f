#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import csv
import math
from datetime import date
from pathlib import Path
from typing import Dict, Mapping, Optional, Sequence, Union

from ..common.dates import parse_date
from ..common.io import write_csv
from .types import MACRO_FIELDS, MacroFeatures

REQUIRED_COLUMNS = ("date", "vix", "treasury_10y", "credit_spread")
NEUTRAL_VIX = 20.0
VIX_JUMP = 2.0


def market_sentiment_from_vix(vix: float) -> float:
    """Risk appetite in [-1, 1]: positive below a VIX of 20, negative above."""
    return math.tanh((NEUTRAL_VIX - vix) / 10.0)


def event_flag(vix: float, previous_vix: Optional[float], regime_switch: bool = False) -> float:
    """1.0 on a regime switch or a day-over-day VIX move larger than two points."""
    if regime_switch:
        return 1.0
    if previous_vix is not None and abs(vix - previous_vix) > VIX_JUMP:
        return 1.0
    return 0.0


def load_macro_csv(path: Union[str, Path]) -> Dict[date, MacroFeatures]:
    """
    Load FRED-shaped macro series. Blank or ``.`` cells are forward-filled from the previous row. When the
    ``market_sentiment`` / ``macro_event_flag`` columns are absent they are derived from the VIX path.

    :param path: CSV with at least date, vix, treasury_10y, credit_spread.
    :return: date -> MacroFeatures in file order.
    """
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        columns = reader.fieldnames or []
        missing = [name for name in REQUIRED_COLUMNS if name not in columns]
        if missing:
            raise ValueError(f"Macro CSV {path} is missing columns {missing}")
        rows = list(reader)
    series: Dict[date, MacroFeatures] = {}
    last: Dict[str, float] = {}
    previous_vix: Optional[float] = None
    for line_no, row in enumerate(rows, start=2):
        values: Dict[str, float] = {}
        for name in MACRO_FIELDS:
            if name not in columns:
                continue
            cell = (row.get(name) or "").strip()
            if cell in ("", "."):
                if name not in last:
                    raise ValueError(f"Macro CSV {path} line {line_no}: no value for {name} to carry forward")
                values[name] = last[name]
            else:
                values[name] = float(cell)
        if "market_sentiment" not in values:
            values["market_sentiment"] = market_sentiment_from_vix(values["vix"])
        if "macro_event_flag" not in values:
            values["macro_event_flag"] = event_flag(values["vix"], previous_vix)
        last.update(values)
        previous_vix = values["vix"]
        series[parse_date(row["date"])] = MacroFeatures(**values)
    return series


def write_macro_csv(path: Union[str, Path], macro: Mapping[date, MacroFeatures], dates: Optional[Sequence[date]] = None):
    dates = list(dates) if dates is not None else sorted(macro)
    rows = [[day.isoformat()] + [getattr(macro[day], name) for name in MACRO_FIELDS] for day in dates]
    return write_csv(path, ("date",) + MACRO_FIELDS, rows)
