#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass
from enum import auto
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from ..common.enums import AutoStringEnum
from ..common.io import atomic_write_text, canonical_json
from ..extract.prompts import PromptTemplate
from ..metrics.quality import SignalMetrics
from .gates import GateResult


class CandidateStatus(str, AutoStringEnum):
    """
    Provides enumeration of prompt candidate states.

    :cvar proposed: Not yet evaluated.
    :cvar evaluated: Metrics and gates computed.
    :cvar frozen: Selected for production use.
    :cvar rejected: Failed gates, was a duplicate, or could not be evaluated.
    """

    proposed = auto()
    evaluated = auto()
    frozen = auto()
    rejected = auto()


@dataclass(frozen=True)
class PromptCandidate:
    template: PromptTemplate
    hypothesis: str = ""
    round: int = 0
    status: CandidateStatus = CandidateStatus.proposed
    metrics: Optional[SignalMetrics] = None
    gate_result: Optional[GateResult] = None
    reason: str = ""

    @property
    def id(self) -> str:
        return self.template.id

    @property
    def composite(self) -> Optional[float]:
        return self.metrics.composite if self.metrics is not None else None

    @property
    def passed(self) -> bool:
        return self.gate_result is not None and self.gate_result.overall_pass

    def to_record(self) -> Dict[str, Any]:
        return {
            "round": self.round,
            "id": self.template.id,
            "lineage": self.template.lineage,
            "template_hash": self.template.hash,
            "hypothesis": self.hypothesis,
            "status": self.status.value,
            "reason": self.reason,
            "metrics": self.metrics.to_record() if self.metrics is not None else None,
            "gates": self.gate_result.to_record() if self.gate_result is not None else None,
        }


class Ledger:
    """
    Candidates in evaluation order. With a path, every appended row is also written as one JSON line; the file is
    rewritten with final statuses when the loop finishes.
    """

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path is not None else None
        self.candidates: List[PromptCandidate] = []
        if self.path is not None:
            atomic_write_text(self.path, "")

    def __len__(self) -> int:
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)

    def append(self, candidate: PromptCandidate) -> None:
        self.candidates.append(candidate)
        if self.path is not None:
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(canonical_json(candidate.to_record()) + "\n")

    def finalize(self, candidates: Sequence[PromptCandidate]) -> None:
        self.candidates = list(candidates)
        if self.path is not None:
            atomic_write_text(self.path, "".join(canonical_json(c.to_record()) + "\n" for c in self.candidates))
