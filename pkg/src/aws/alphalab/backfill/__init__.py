#  Copyright 2024 Amazon.com, Inc. or its affiliates.

# flake8: noqa
from .adapters import AdapterConfig, HttpSourceAdapter, MockAdapter, S3ReplayAdapter, SourceAdapter, fetch_source
from .calendar import TradingCalendar
from .errors import AuthError, NetworkError, ParseError, RateLimited, SourceError, StorageError, UnknownTradingDay
from .store import BackfillStore
from .types import EventBundle, ItemKind, RawItem
