#  Copyright 2024 Amazon.com, Inc. or its affiliates.

# flake8: noqa
from .config import SynthConfig
from .export import export_market, write_ohlcv_csvs
from .generator import (
    Scenario,
    drift_matrix,
    generate_events,
    generate_market,
    generate_scenario,
    inject_events,
    trading_dates,
)
from .headlines import events_from_items, pseudo_headlines, read_events_jsonl, write_events_jsonl, write_replay_jsonl
from .types import HiddenEvent, MarketData, Regime
