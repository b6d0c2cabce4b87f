#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import logging
import traceback
from datetime import date
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import gevent
from gevent.pool import Pool

from ..backfill.types import EventBundle
from .cache import ExtractionCache, cache_key
from .clients import ExtractorClient
from .errors import ExtractorError, PanelError, SchemaError
from .parsing import parse_features
from .prompts import PromptTemplate, render_prompt
from .ratelimit import TokenBucket
from .types import FeaturePanel, MacroFeatures, StockFeatures

MacroSource = Union[Mapping[date, MacroFeatures], Callable[[date], MacroFeatures]]


def extract_bundle(
    client: ExtractorClient,
    template: PromptTemplate,
    bundle: EventBundle,
    cache: Optional[ExtractionCache] = None,
    max_attempts: int = 3,
    backoff_s: float = 1.0,
    rate_limiter: Optional[TokenBucket] = None,
) -> StockFeatures:
    """
    Extract features for one bundle. Empty bundles short-circuit to the all-zero vector without a client call;
    otherwise the cache is consulted under (template hash, bundle hash) before the client is contacted.

    Both transport failures and unparseable replies are retried up to ``max_attempts`` times with exponential
    backoff starting at ``backoff_s``. The last error is raised once attempts are exhausted.

    :param client: Extractor back end.
    :param template: Validated prompt template.
    :param bundle: Bundle to extract.
    :param cache: Optional extraction cache.
    :param max_attempts: Attempts before giving up.
    :param backoff_s: First retry delay in seconds.
    :param rate_limiter: Optional limiter consulted before every client call.
    :return: Bounded features.
    """
    if bundle.is_empty:
        return StockFeatures.zero()
    prompt = render_prompt(template, bundle)
    key = cache_key(template, bundle)
    if cache is not None:
        cached = cache.get(key)
        if cached is not None:
            return cached
    last_error: Optional[Exception] = None
    for attempt in range(1, max_attempts + 1):
        if rate_limiter is not None:
            rate_limiter.acquire()
        try:
            features = parse_features(client.complete(prompt, bundle))
        except (SchemaError, ExtractorError) as err:
            last_error = err
            logging.info(f"Extraction attempt {attempt}/{max_attempts} for {bundle.ticker} {bundle.date} failed: {err}")
            if attempt < max_attempts:
                gevent.sleep(backoff_s * 2 ** (attempt - 1))
            continue
        if cache is not None:
            cache.put(key, features)
        return features
    if isinstance(last_error, SchemaError):
        raise last_error
    raise ExtractorError(f"Extraction for {bundle.ticker} {bundle.date} failed after {max_attempts} attempts: {last_error}")


def _macro_for(macro_source: MacroSource, day: date) -> MacroFeatures:
    if callable(macro_source):
        return macro_source(day)
    return macro_source[day]


def extract_panel(
    client: ExtractorClient,
    template: PromptTemplate,
    bundles: Sequence[EventBundle],
    macro_source: MacroSource,
    cache: Optional[ExtractionCache] = None,
    max_in_flight: int = 8,
    rate_limiter: Optional[TokenBucket] = None,
    failure_ceiling: float = 0.2,
    max_attempts: int = 3,
    backoff_s: float = 1.0,
) -> FeaturePanel:
    """
    Extract a complete panel from bundles covering a rectangular date x ticker grid. Extractions run in a gevent
    pool capped at ``max_in_flight``; results are merged by (date, ticker) key so concurrency never changes the
    output. Cells whose extraction fails fall back to the all-zero vector with a warning unless the failure rate
    exceeds ``failure_ceiling``.

    :return: The complete panel.
    """
    if not bundles:
        raise PanelError("No bundles to extract")
    template.validate()
    dates = sorted({bundle.date for bundle in bundles})
    tickers = sorted({bundle.ticker for bundle in bundles})
    keys = {bundle.key for bundle in bundles}
    if len(keys) != len(bundles) or len(keys) != len(dates) * len(tickers):
        raise PanelError(
            f"Bundles do not cover a rectangular grid: {len(bundles)} bundles, {len(dates)} dates, {len(tickers)} tickers"
        )
    try:
        macro = {day: _macro_for(macro_source, day) for day in dates}
    except KeyError as err:
        raise PanelError(f"No macro features for {err}") from err

    results: Dict[Tuple[date, str], StockFeatures] = {}
    failures: Dict[Tuple[date, str], Exception] = {}
    fatal: List[BaseException] = []

    def work(bundle: EventBundle) -> None:
        try:
            results[bundle.key] = extract_bundle(
                client,
                template,
                bundle,
                cache=cache,
                max_attempts=max_attempts,
                backoff_s=backoff_s,
                rate_limiter=rate_limiter,
            )
        except (SchemaError, ExtractorError) as err:
            failures[bundle.key] = err
            logging.warning(f"Extraction for {bundle.ticker} {bundle.date} failed, using all-zero features: {err}")
        except Exception as err:
            logging.error(traceback.format_exc())
            fatal.append(err)

    pool = Pool(max_in_flight)
    for bundle in bundles:
        pool.spawn(work, bundle)
    pool.join()

    if fatal:
        raise fatal[0]
    rate = len(failures) / len(bundles)
    if rate > failure_ceiling:
        raise PanelError(f"Extraction failure rate {rate:.1%} exceeds ceiling {failure_ceiling:.1%}")
    stock = {key: results.get(key, StockFeatures.zero()) for key in keys}
    logging.info(
        f"Extracted panel {dates[0]}..{dates[-1]} x {len(tickers)} tickers with template {template.id}: "
        f"{len(failures)} failed cells"
    )
    return FeaturePanel(dates=tuple(dates), tickers=tuple(tickers), stock=stock, macro=macro)
