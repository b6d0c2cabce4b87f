#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import json
import logging
import math
from typing import Any, Dict, List, Optional

from .errors import SchemaError
from .types import STOCK_BOUNDS, STOCK_FIELDS, StockFeatures

_DECODER = json.JSONDecoder()


def first_json_object(raw: str) -> Dict[str, Any]:
    """
    Find the first JSON object embedded in free text, trying each opening brace in turn.

    :param raw: Extractor reply.
    :return: The decoded object.
    """
    start = raw.find("{")
    while start != -1:
        try:
            candidate, _ = _DECODER.raw_decode(raw, start)
        except json.JSONDecodeError:
            candidate = None
        if isinstance(candidate, dict):
            return candidate
        start = raw.find("{", start + 1)
    raise SchemaError("Reply contains no JSON object")


def parse_features(raw: str, warnings_out: Optional[List[str]] = None) -> StockFeatures:
    """
    Parse an extractor reply into bounded stock features. Out-of-range numerics are clamped into their interval
    rather than rejected; each clamp is logged and appended to ``warnings_out`` when given.

    :param raw: Extractor reply text.
    :param warnings_out: Optional list collecting clamp warnings.
    :return: Validated features.
    """
    payload = first_json_object(raw)
    values = {}
    for name in STOCK_FIELDS:
        if name not in payload:
            raise SchemaError(f"Reply is missing required field {name}")
        value = payload[name]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"Field {name} is not numeric: {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise SchemaError(f"Field {name} is not finite: {value!r}")
        low, high = STOCK_BOUNDS[name]
        clamped = min(max(value, low), high)
        if clamped != value:
            message = f"Clamped {name} from {value} to {clamped}"
            logging.warning(message)
            if warnings_out is not None:
                warnings_out.append(message)
        values[name] = clamped
    reasoning = payload.get("reasoning", "")
    return StockFeatures(**values, reasoning=reasoning if isinstance(reasoning, str) else json.dumps(reasoning))
