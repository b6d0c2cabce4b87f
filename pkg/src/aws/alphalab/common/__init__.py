#  Copyright 2024 Amazon.com, Inc. or its affiliates.

# flake8: noqa
from .dates import DayRange, market_close_utc, parse_date, parse_timestamp
from .enums import AutoStringEnum
from .errors import AlphaLabError, ConfigError, UsageError
from .io import atomic_write_json, atomic_write_text, canonical_json, content_hash, file_sha256, write_csv
from .numeric import sample_std
from .seeding import child_rngs, seed_sequence
from .universes import load_universe, load_universes
