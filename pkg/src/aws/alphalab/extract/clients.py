#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import json
import logging
import os
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

import numpy as np
import requests

from ..backfill.types import EventBundle
from .config import ExtractorConfig
from .errors import ExtractorError
from .oracle import decode_event_headline, oracle_extract


class ExtractorClient(ABC):
    """Stateless back end turning a rendered prompt into reply text."""

    @abstractmethod
    def complete(self, prompt: str, bundle: EventBundle) -> str:
        """
        :param prompt: Rendered prompt.
        :param bundle: The bundle the prompt was rendered from.
        :return: Raw reply text.
        """


class RemoteLLMClient(ExtractorClient):
    """
    Chat-completion style HTTP client: POST ``{model, messages}`` and read the reply content from
    ``choices[0].message.content`` (or a top-level ``content`` field).
    """

    def __init__(self, config: ExtractorConfig, session: Optional[requests.Session] = None):
        self.config = config
        self.session = session or requests.Session()

    def _headers(self) -> Dict[str, str]:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.config.api_key_env)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        return headers

    def complete(self, prompt: str, bundle: EventBundle) -> str:
        body = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        }
        try:
            res = self.session.post(
                self.config.endpoint, json=body, headers=self._headers(), timeout=self.config.timeout_sec
            )
        except requests.RequestException as err:
            raise ExtractorError(f"Extractor request for {bundle.ticker} {bundle.date} failed: {err}") from err
        if res.status_code >= 400:
            raise ExtractorError(f"Extractor returned HTTP {res.status_code} for {bundle.ticker} {bundle.date}")
        try:
            payload: Any = res.json()
        except ValueError as err:
            raise ExtractorError(f"Extractor reply is not JSON: {err}") from err
        logging.debug(f"Extractor reply for {bundle.ticker} {bundle.date}: {payload}")
        if isinstance(payload, dict):
            choices = payload.get("choices")
            if isinstance(choices, list) and choices:
                message = choices[0].get("message", {}) if isinstance(choices[0], dict) else {}
                if isinstance(message, dict) and isinstance(message.get("content"), str):
                    return message["content"]
            if isinstance(payload.get("content"), str):
                return payload["content"]
        raise ExtractorError("Extractor reply carries no message content")


class OracleClient(ExtractorClient):
    """
    Deterministic synthetic extractor. It decodes the first planted-event headline in the bundle and answers with
    :func:`oracle_extract`; the noise stream is seeded from (seed, bundle content hash) so the reply depends only on
    the bundle and never on call order.
    """

    def __init__(self, noise_sigma: float = 0.0, seed: int = 0):
        if noise_sigma < 0:
            raise ValueError("noise_sigma must be non-negative")
        self.noise_sigma = noise_sigma
        self.seed = seed

    def complete(self, prompt: str, bundle: EventBundle) -> str:
        event = None
        for item in bundle.items:
            event = decode_event_headline(item.headline, item.body)
            if event is not None:
                break
        rng = np.random.default_rng([self.seed, int(bundle.content_hash, 16)])
        features = oracle_extract(event, self.noise_sigma, rng)
        reply = features.to_record()
        reply["reasoning"] = "planted event" if event is not None else "no planted event"
        return json.dumps(reply)


def build_client(config: ExtractorConfig, session: Optional[requests.Session] = None) -> ExtractorClient:
    if config.kind == "remote":
        return RemoteLLMClient(config, session=session)
    return OracleClient(noise_sigma=config.noise_sigma, seed=config.seed)
