#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from datetime import date, timedelta
from typing import Any, Dict, Optional, Sequence

import numpy as np
import pytest

from aws.alphalab.backfill import RawItem, TradingCalendar
from aws.alphalab.extract import FeaturePanel, MacroFeatures, StockFeatures
from aws.alphalab.synthmarket import MarketData, SynthConfig, generate_scenario


def make_item(ticker: str, published_at: str, headline: str = "headline", body: str = "", source: str = "test") -> RawItem:
    return RawItem(source_id=source, ticker=ticker, published_at=published_at, kind="news", headline=headline, body=body)


class FakeResponse:
    def __init__(self, status_code: int = 200, payload: Any = None, headers: Optional[Dict[str, str]] = None):
        self.status_code = status_code
        self._payload = payload
        self.headers = headers or {}
        self.text = "" if payload is None else str(payload)

    def json(self):
        if isinstance(self._payload, Exception):
            raise self._payload
        return self._payload


class FakeSession:
    """Stands in for requests.Session: replays canned responses and records each call."""

    def __init__(self, *responses):
        self.responses = list(responses)
        self.calls = []

    def _next(self, method, url, kwargs):
        self.calls.append((method, url, kwargs))
        response = self.responses.pop(0) if len(self.responses) > 1 else self.responses[0]
        if isinstance(response, Exception):
            raise response
        return response

    def get(self, url, **kwargs):
        return self._next("GET", url, kwargs)

    def post(self, url, **kwargs):
        return self._next("POST", url, kwargs)


@pytest.fixture
def calendar() -> TradingCalendar:
    return TradingCalendar(["2025-01-02", "2025-01-03", "2025-01-06", "2025-01-07"])


@pytest.fixture(scope="session")
def small_scenario():
    """40 names over 120 days with strong, noiseless planted events."""
    config = SynthConfig(n_tickers=40, n_days=120, event_rate=0.5, alpha_scale=0.08, seed=11)
    return config, generate_scenario(config)


MACRO = MacroFeatures(vix=16.0, treasury_10y=4.0, credit_spread=1.2)


def day_list(n: int, start: date = date(2025, 1, 2)):
    return [start + timedelta(days=i) for i in range(n)]


def make_panel(sentiment, impact=None, tickers: Optional[Sequence[str]] = None, dates=None) -> FeaturePanel:
    """Panel from (dates x tickers) sentiment and impact matrices; other stock fields stay zero."""
    sentiment = np.atleast_2d(np.asarray(sentiment, dtype=float))
    impact = np.abs(sentiment) if impact is None else np.atleast_2d(np.asarray(impact, dtype=float))
    n_dates, n_tickers = sentiment.shape
    dates = dates or day_list(n_dates)
    tickers = tickers or [f"T{j}" for j in range(n_tickers)]
    stock = {
        (d, t): StockFeatures(sentiment=sentiment[i, j], impact=impact[i, j])
        for i, d in enumerate(dates)
        for j, t in enumerate(tickers)
    }
    return FeaturePanel(dates=tuple(dates), tickers=tuple(tickers), stock=stock, macro={d: MACRO for d in dates})


def make_market(closes, tickers: Optional[Sequence[str]] = None, dates=None, vix: Optional[Sequence[float]] = None):
    """Market whose bars all equal the given (dates x tickers) closes."""
    closes = np.asarray(closes, dtype=float)
    if closes.ndim == 1:
        closes = closes[:, None]
    n_dates, n_tickers = closes.shape
    dates = dates or day_list(n_dates)
    tickers = tickers or [f"T{j}" for j in range(n_tickers)]
    vix = list(vix) if vix is not None else [16.0] * n_dates
    macro = {d: MacroFeatures(vix=v, treasury_10y=4.0, credit_spread=1.2) for d, v in zip(dates, vix)}
    return MarketData(
        dates=tuple(dates),
        tickers=tuple(tickers),
        open=closes,
        high=closes,
        low=closes,
        close=closes,
        volume=np.full(closes.shape, 1e6),
        macro_series=macro,
        regime=("calm",) * n_dates,
    )
