#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import json
import logging
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import requests

from ..backfill.errors import NetworkError
from ..common.errors import ConfigError
from ..extract.prompts import DEFAULT_PROMPT_DIR, PromptTemplate, split_hypothesis
from .candidate import PromptCandidate
from .errors import ProposerExhausted

META_INSTRUCTIONS = (
    "You improve a feature-extraction prompt for a trading desk. Propose exactly one structural mutation of the "
    "current prompt that addresses the failing or weakest gate below. Reply with the full new prompt text only; "
    "optionally start with a line '## hypothesis: <what the mutation tests>'. Keep the {{.Ticker}} and {{.Date}} "
    "placeholders exactly once each."
)


def build_feedback(candidate: PromptCandidate) -> Dict[str, Any]:
    """Metrics and gate values of an evaluated candidate, as sent to a proposer."""
    return {
        "template_id": candidate.id,
        "hypothesis": candidate.hypothesis,
        "metrics": candidate.metrics.to_record() if candidate.metrics is not None else None,
        "gates": candidate.gate_result.to_record() if candidate.gate_result is not None else None,
    }


class Proposer(ABC):
    @abstractmethod
    def propose(self, current: PromptCandidate, feedback: Mapping[str, Any], round_no: int) -> PromptCandidate:
        """
        :param current: The latest evaluated candidate.
        :param feedback: Serialized metrics and gate results of ``current``.
        :param round_no: Round the new candidate belongs to.
        :return: A proposed candidate whose template lineage is ``current.id``.
        """


class ScriptedProposer(Proposer):
    """Proposes templates from a fixed ordered list, then raises ProposerExhausted."""

    def __init__(self, templates: Sequence[Tuple[PromptTemplate, str]]):
        self._queue: List[Tuple[PromptTemplate, str]] = list(templates)
        self.feedback_log: List[Mapping[str, Any]] = []

    @classmethod
    def from_directory(cls, directory: Union[str, Path] = DEFAULT_PROMPT_DIR, pattern: str = "mut*.txt"):
        entries = []
        for path in sorted(Path(directory).glob(pattern)):
            hypothesis, body = split_hypothesis(path.read_text(encoding="utf-8"))
            entries.append((PromptTemplate(id=path.stem, body=body.strip() + "\n"), hypothesis))
        if not entries:
            raise ConfigError(f"No templates matching {pattern} in {directory}")
        return cls(entries)

    @property
    def remaining(self) -> int:
        return len(self._queue)

    def propose(self, current: PromptCandidate, feedback: Mapping[str, Any], round_no: int) -> PromptCandidate:
        if not self._queue:
            raise ProposerExhausted("Scripted proposer has no templates left")
        self.feedback_log.append(feedback)
        template, hypothesis = self._queue.pop(0)
        return PromptCandidate(
            template=PromptTemplate(id=template.id, body=template.body, lineage=current.id),
            hypothesis=hypothesis,
            round=round_no,
        )


@dataclass
class MetaProposerConfig:
    endpoint: str
    model: str = ""
    api_key_env: str = "ALPHALAB_META_API_KEY"
    timeout_sec: float = 120.0

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "MetaProposerConfig":
        unknown = set(values) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigError(f"Unknown meta-proposer keys: {sorted(unknown)}")
        if not values.get("endpoint"):
            raise ConfigError("The remote proposer needs an endpoint")
        return cls(**values)


class RemoteMetaProposer(Proposer):
    """Sends the current prompt and its feedback to a meta-optimizer endpoint and reads back a mutated prompt."""

    def __init__(self, config: MetaProposerConfig, session: Optional[requests.Session] = None):
        self.config = config
        self.session = session or requests.Session()

    def propose(self, current: PromptCandidate, feedback: Mapping[str, Any], round_no: int) -> PromptCandidate:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.config.api_key_env)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        body = {
            "model": self.config.model,
            "messages": [
                {"role": "system", "content": META_INSTRUCTIONS},
                {
                    "role": "user",
                    "content": (
                        f"CURRENT PROMPT:\n{current.template.body}\n\n"
                        f"FEEDBACK:\n{json.dumps(feedback, sort_keys=True)}"
                    ),
                },
            ],
        }
        try:
            res = self.session.post(self.config.endpoint, json=body, headers=headers, timeout=self.config.timeout_sec)
        except requests.RequestException as err:
            raise NetworkError(f"Meta-optimizer request failed: {err}") from err
        if res.status_code >= 400:
            raise NetworkError(f"Meta-optimizer returned HTTP {res.status_code}")
        try:
            payload = res.json()
            text = payload["choices"][0]["message"]["content"] if "choices" in payload else payload["content"]
        except (ValueError, KeyError, IndexError, TypeError) as err:
            raise NetworkError(f"Meta-optimizer reply is malformed: {err}") from err
        hypothesis, prompt = split_hypothesis(str(text))
        template = PromptTemplate(id=f"round{round_no}", body=prompt.strip() + "\n", lineage=current.id)
        logging.info(f"Meta-optimizer proposed {template.id} ({template.hash}): {hypothesis}")
        return PromptCandidate(template=template, hypothesis=hypothesis, round=round_no)
