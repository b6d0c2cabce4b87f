#  Copyright 2024 Amazon.com, Inc. or its affiliates.

# flake8: noqa
from .cache import ExtractionCache, cache_key
from .clients import ExtractorClient, OracleClient, RemoteLLMClient, build_client
from .config import ExtractorConfig
from .errors import ExtractorError, PanelError, SchemaError, TemplateError
from .extractor import extract_bundle, extract_panel
from .macro import event_flag, load_macro_csv, market_sentiment_from_vix, write_macro_csv
from .oracle import (
    DecodedEvent,
    decode_event_headline,
    format_event_body,
    format_event_headline,
    oracle_extract,
    oracle_panel,
)
from .parsing import first_json_object, parse_features
from .prompts import (
    DEFAULT_PROMPT_DIR,
    NO_EVENTS_MARKER,
    PromptTemplate,
    load_template,
    load_templates,
    render_prompt,
    split_hypothesis,
)
from .ratelimit import TokenBucket
from .types import MACRO_FIELDS, STOCK_FIELDS, FeaturePanel, MacroFeatures, StockFeatures
