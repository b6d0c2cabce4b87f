#  Copyright 2024 Amazon.com, Inc. or its affiliates.

# flake8: noqa
from .candidate import CandidateStatus, Ledger, PromptCandidate
from .errors import NoPass, PreconditionError, ProposerExhausted
from .gates import GateCheck, GateResult, GateStatus, GateThresholds, evaluate_gates, format_gate_table
from .loop import LoopConfig, OOSReport, evaluate_candidate, optimize, select_candidate, validate_oos
from .proposers import MetaProposerConfig, Proposer, RemoteMetaProposer, ScriptedProposer, build_feedback
