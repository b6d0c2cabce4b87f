#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import hashlib
import re
from dataclasses import dataclass
from datetime import date
from typing import Mapping, Optional, Protocol, Sequence, Tuple

import numpy as np

from .types import FeaturePanel, MacroFeatures, StockFeatures

HEADLINE_PATTERN = re.compile(r"^(POSITIVE|NEGATIVE) surprise of magnitude (\S+) for (\S+)$")
BODY_PATTERN = re.compile(r"horizon_days=(\d+) alpha_per_day=(\S+)")


class PlantedSignal(Protocol):
    true_alpha_direction: int
    strength: float


@dataclass(frozen=True)
class DecodedEvent:
    """Event fields recovered from a synthetic headline."""

    ticker: str
    true_alpha_direction: int
    strength: float
    horizon_days: int
    alpha_per_day: float


def format_event_headline(direction: int, strength: float, ticker: str) -> str:
    label = "POSITIVE" if direction > 0 else "NEGATIVE"
    return f"{label} surprise of magnitude {strength!r} for {ticker}"


def format_event_body(horizon_days: int, alpha_per_day: float) -> str:
    return f"horizon_days={horizon_days} alpha_per_day={alpha_per_day!r}"


def decode_event_headline(headline: str, body: str = "") -> Optional[DecodedEvent]:
    """
    Recover a planted event from a synthetic headline; anything else decodes to None.

    :param headline: Item headline.
    :param body: Item body carrying horizon and drift.
    :return: The decoded event or None.
    """
    match = HEADLINE_PATTERN.match(headline.strip())
    if match is None:
        return None
    try:
        strength = float(match.group(2))
    except ValueError:
        return None
    horizon, alpha = 1, 0.0
    body_match = BODY_PATTERN.search(body or "")
    if body_match is not None:
        horizon, alpha = int(body_match.group(1)), float(body_match.group(2))
    return DecodedEvent(
        ticker=match.group(3),
        true_alpha_direction=1 if match.group(1) == "POSITIVE" else -1,
        strength=strength,
        horizon_days=horizon,
        alpha_per_day=alpha,
    )


def ticker_key(ticker: str) -> int:
    """Stable 64-bit integer for a ticker symbol, independent of the interpreter's hash salt."""
    return int(hashlib.sha256(ticker.encode("utf-8")).hexdigest()[:16], 16)


def _clamp(value: float, low: float, high: float) -> float:
    return float(min(max(value, low), high))


def oracle_extract(event: Optional[PlantedSignal], noise_sigma: float, rng: np.random.Generator) -> StockFeatures:
    """
    Noisy view of a planted event.

    With an event, four Gaussian draws n1..n4 with scale ``noise_sigma`` are taken (always four, so the stream
    advances identically for every event) and::

        sentiment           = clamp(direction * strength + n1, -1, 1)
        impact              = clamp(strength + n2, 0, 1)
        conflicting_signals = clamp(|n3|, 0, 1)
        news_novelty        = clamp(0.5 + 0.5 * strength + n4, 0, 1)

    Without an event the all-zero vector is returned and the stream is left untouched.

    :param event: Object exposing ``true_alpha_direction`` and ``strength``, or None.
    :param noise_sigma: Non-negative noise scale.
    :param rng: Seeded generator.
    :return: Bounded features.
    """
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be non-negative")
    if event is None:
        return StockFeatures.zero()
    n1, n2, n3, n4 = rng.normal(0.0, noise_sigma, size=4)
    strength = float(event.strength)
    return StockFeatures(
        sentiment=_clamp(event.true_alpha_direction * strength + n1, -1.0, 1.0),
        impact=_clamp(strength + n2, 0.0, 1.0),
        conflicting_signals=_clamp(abs(n3), 0.0, 1.0),
        news_novelty=_clamp(0.5 + 0.5 * strength + n4, 0.0, 1.0),
    )


def oracle_panel(
    events: Sequence,
    dates: Sequence[date],
    tickers: Sequence[str],
    macro: Mapping[date, MacroFeatures],
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> FeaturePanel:
    """
    Build a feature panel straight from planted events, skipping rendering and the store. Each cell draws from its
    own stream seeded by (seed, date ordinal, ticker key), so a cell draws the same noise whatever the universe
    order or membership.

    :param events: Objects with ``ticker``, ``date``, ``true_alpha_direction`` and ``strength``.
    :param dates: Panel dates.
    :param tickers: Panel universe.
    :param macro: Macro features per date.
    :param noise_sigma: Oracle noise.
    :param seed: Noise seed.
    :return: Complete panel.
    """
    by_cell: Mapping[Tuple[date, str], object] = {(event.date, event.ticker): event for event in events}
    stock = {}
    for day in dates:
        for ticker in tickers:
            rng = np.random.default_rng([seed, day.toordinal(), ticker_key(ticker)])
            stock[(day, ticker)] = oracle_extract(by_cell.get((day, ticker)), noise_sigma, rng)
    return FeaturePanel(dates=tuple(dates), tickers=tuple(tickers), stock=stock, macro={d: macro[d] for d in dates})
