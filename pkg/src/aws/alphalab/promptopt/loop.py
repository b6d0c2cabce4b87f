#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import logging
import traceback
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from ..backfill.store import BackfillStore
from ..common.dates import DayRange
from ..common.errors import ConfigError
from ..extract.cache import ExtractionCache
from ..extract.clients import ExtractorClient
from ..extract.errors import PanelError, TemplateError
from ..extract.extractor import MacroSource, extract_panel
from ..extract.prompts import PromptTemplate
from ..extract.ratelimit import TokenBucket
from ..extract.types import FeaturePanel
from ..metrics.quality import CompositeWeights, SignalMetrics, compute_signal_metrics
from ..synthmarket.types import MarketData
from .candidate import CandidateStatus, Ledger, PromptCandidate
from .errors import NoPass, PreconditionError, ProposerExhausted
from .gates import GateResult, GateStatus, GateThresholds, evaluate_gates, format_gate_table
from .proposers import Proposer, build_feedback

SELECTION_RULES = ("composite", "ic_ir")
ExtractorHandle = Union[ExtractorClient, Callable[[PromptTemplate], ExtractorClient]]


@dataclass
class LoopConfig:
    """
    Everything one optimization run needs. The extractor may be a single client or a callable mapping each
    template to the client that should extract it.
    """

    optimization_window: DayRange
    oos_window: DayRange
    universe: Sequence[str]
    store: BackfillStore
    market: MarketData
    macro_source: MacroSource
    extractor: ExtractorHandle
    proposer: Proposer
    baseline: PromptTemplate
    baseline_hypothesis: str = "baseline"
    max_rounds: int = 5
    thresholds: GateThresholds = field(default_factory=GateThresholds)
    weights: CompositeWeights = field(default_factory=CompositeWeights)
    horizon_days: int = 5
    selection_rule: str = "composite"
    min_names: int = 5
    cache: Optional[ExtractionCache] = None
    ledger_path: Optional[str] = None
    max_in_flight: int = 8
    failure_ceiling: float = 0.2
    max_attempts: int = 3
    backoff_s: float = 1.0
    rate_limiter: Optional[TokenBucket] = None

    def __post_init__(self):
        if self.optimization_window.overlaps(self.oos_window):
            raise ConfigError(f"OOS window {self.oos_window} overlaps optimization window {self.optimization_window}")
        if self.oos_window.start <= self.optimization_window.end:
            raise ConfigError("OOS window must start after the optimization window ends")
        if self.selection_rule not in SELECTION_RULES:
            raise ConfigError(f"selection_rule must be one of {SELECTION_RULES}")
        if self.max_rounds < 0 or self.horizon_days < 1:
            raise ConfigError("max_rounds must be >= 0 and horizon_days >= 1")
        self.universe = tuple(sorted(set(self.universe)))

    def client_for(self, template: PromptTemplate) -> ExtractorClient:
        if isinstance(self.extractor, ExtractorClient):
            return self.extractor
        return self.extractor(template)


@dataclass(frozen=True)
class OOSReport:
    """Out-of-sample metrics of a frozen candidate; ``regressions`` names gates that passed in-sample only."""

    metrics: SignalMetrics
    gate_result: GateResult
    regressions: Tuple[str, ...]

    def to_record(self) -> Dict[str, Any]:
        return {
            "metrics": self.metrics.to_record(),
            "gates": self.gate_result.to_record(),
            "regressions": list(self.regressions),
        }


def _panel(template: PromptTemplate, window: DayRange, config: LoopConfig) -> FeaturePanel:
    bundles = config.store.query_bundles(config.universe, window)
    return extract_panel(
        config.client_for(template),
        template,
        bundles,
        config.macro_source,
        cache=config.cache,
        max_in_flight=config.max_in_flight,
        rate_limiter=config.rate_limiter,
        failure_ceiling=config.failure_ceiling,
        max_attempts=config.max_attempts,
        backoff_s=config.backoff_s,
    )


def _metrics(panel: FeaturePanel, config: LoopConfig) -> SignalMetrics:
    return compute_signal_metrics(
        panel, config.market, horizon_days=config.horizon_days, weights=config.weights, min_names=config.min_names
    )


def evaluate_candidate(candidate: PromptCandidate, config: LoopConfig) -> PromptCandidate:
    """
    Extract the candidate's panel over the optimization window, compute its metrics and gates.

    :param candidate: A proposed candidate.
    :param config: Loop configuration.
    :return: The candidate in the evaluated state.
    """
    if candidate.status != CandidateStatus.proposed:
        raise PreconditionError(f"Candidate {candidate.id} is {candidate.status.value}, expected proposed")
    panel = _panel(candidate.template, config.optimization_window, config)
    metrics = _metrics(panel, config)
    gates = evaluate_gates(metrics, config.thresholds)
    logging.info(format_gate_table(gates, title=f"Round {candidate.round}: {candidate.id}"))
    return replace(candidate, status=CandidateStatus.evaluated, metrics=metrics, gate_result=gates)


def _score(candidate: PromptCandidate, rule: str) -> float:
    return candidate.metrics.ic_ir if rule == "ic_ir" else candidate.metrics.composite


def select_candidate(candidates: Sequence[PromptCandidate], rule: str = "composite") -> Optional[PromptCandidate]:
    """Highest score by rule; ties go to the earliest round, then the smallest template hash."""
    if not candidates:
        return None
    return min(candidates, key=lambda c: (-_score(c, rule), c.round, c.template.hash))


def _evaluate_or_reject(candidate: PromptCandidate, config: LoopConfig) -> PromptCandidate:
    try:
        return evaluate_candidate(candidate, config)
    except (PanelError, TemplateError) as err:
        logging.error(traceback.format_exc())
        return replace(candidate, status=CandidateStatus.rejected, reason=f"{type(err).__name__}: {err}")


def optimize(config: LoopConfig) -> Tuple[PromptCandidate, List[PromptCandidate]]:
    """
    Run the mutation, evaluation and selection loop. The baseline is evaluated first, then up to ``max_rounds``
    proposals, each fed the latest evaluated candidate's metrics. Duplicate templates consume a round and are
    skipped. Among all gate-passing candidates the best by the selection rule is frozen; failing candidates are
    marked rejected.

    :param config: Loop configuration.
    :return: (frozen candidate, ledger in evaluation order).
    """
    ledger = Ledger(config.ledger_path)
    seen: Dict[str, str] = {}
    current = _evaluate_or_reject(
        PromptCandidate(template=config.baseline, hypothesis=config.baseline_hypothesis, round=0), config
    )
    seen[config.baseline.hash] = config.baseline.id
    ledger.append(current)

    for round_no in range(1, config.max_rounds + 1):
        try:
            proposed = config.proposer.propose(current, build_feedback(current), round_no)
        except ProposerExhausted:
            logging.info(f"Proposer exhausted after {round_no - 1} rounds")
            break
        if proposed.template.hash in seen:
            logging.warning(f"Round {round_no}: {proposed.id} duplicates {seen[proposed.template.hash]}, skipped")
            ledger.append(
                replace(proposed, status=CandidateStatus.rejected, reason=f"duplicate of {seen[proposed.template.hash]}")
            )
            continue
        seen[proposed.template.hash] = proposed.id
        evaluated = _evaluate_or_reject(proposed, config)
        ledger.append(evaluated)
        if evaluated.status == CandidateStatus.evaluated:
            current = evaluated

    evaluated = [c for c in ledger if c.status == CandidateStatus.evaluated]
    winner = select_candidate([c for c in evaluated if c.passed], config.selection_rule)
    final = []
    for candidate in ledger:
        if winner is not None and candidate is winner:
            final.append(replace(candidate, status=CandidateStatus.frozen))
        elif candidate.status == CandidateStatus.evaluated and not candidate.passed:
            failed = [check.name for check in candidate.gate_result.checks if check.status == GateStatus.FAIL]
            final.append(replace(candidate, status=CandidateStatus.rejected, reason=f"failed gates: {', '.join(failed)}"))
        else:
            final.append(candidate)

    if winner is None:
        # every evaluated candidate already carries the rejected status in ``final``
        best = select_candidate(evaluated, config.selection_rule)
        if best is not None:
            best = final[ledger.candidates.index(best)]
        ledger.finalize(final)
        raise NoPass(f"No candidate passed every gate after {len(final)} ledger rows", best=best, ledger=final)

    ledger.finalize(final)
    frozen = next(c for c in final if c.status == CandidateStatus.frozen)
    logging.info(f"Froze {frozen.id} (round {frozen.round}, composite {frozen.composite:+.4f})")
    return frozen, final


def validate_oos(candidate: PromptCandidate, config: LoopConfig) -> OOSReport:
    """
    Recompute metrics of a frozen candidate on the OOS window only. Reporting only: the candidate is not changed.

    :param candidate: The frozen candidate.
    :param config: Loop configuration.
    :return: OOS metrics, gates and the gates that regressed.
    """
    if candidate.status != CandidateStatus.frozen:
        raise PreconditionError(f"Candidate {candidate.id} is {candidate.status.value}, expected frozen")
    panel = _panel(candidate.template, config.oos_window, config)
    metrics = _metrics(panel, config)
    gates = evaluate_gates(metrics, config.thresholds)
    regressions = []
    if candidate.gate_result is not None:
        for check in gates.checks:
            if check.status == GateStatus.FAIL and candidate.gate_result.check(check.name).status == GateStatus.PASS:
                regressions.append(check.name)
                logging.warning(f"Gate {check.name} regressed out of sample: {check.value:+.4f}")
    logging.info(format_gate_table(gates, title=f"OOS: {candidate.id}"))
    return OOSReport(metrics=metrics, gate_result=gates, regressions=tuple(regressions))
