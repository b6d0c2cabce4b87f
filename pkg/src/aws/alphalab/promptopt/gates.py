#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import math
from collections import Counter
from dataclasses import asdict, dataclass, fields
from enum import auto
from typing import Any, Dict, Mapping, Tuple

from ..common.enums import AutoStringEnum
from ..common.errors import ConfigError
from ..metrics.quality import SignalMetrics


class GateStatus(str, AutoStringEnum):
    """
    Provides enumeration of gate outcomes.

    :cvar PASS: Metric clears its threshold.
    :cvar FAIL: Metric misses its threshold.
    """

    PASS = auto()
    FAIL = auto()


@dataclass(frozen=True)
class GateThresholds:
    """
    Adequacy gate thresholds. Every gate is inclusive (>=) except the quintile spread, which must strictly
    exceed its minimum.
    """

    signal_coverage_min: float = 0.25
    ic_ir_min: float = 0.05
    quintile_spread_min: float = 0.0
    hit_rate_min: float = 0.52

    def __post_init__(self):
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise ConfigError(f"Gate threshold {f.name} must be finite")

    def to_record(self) -> Dict[str, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "GateThresholds":
        unknown = set(values) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigError(f"Unknown [gates] keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in values.items()})


@dataclass(frozen=True)
class GateCheck:
    name: str
    threshold: float
    value: float
    strict: bool
    status: GateStatus

    def to_record(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "threshold": self.threshold,
            "value": self.value,
            "comparison": ">" if self.strict else ">=",
            "status": self.status.value,
        }


@dataclass(frozen=True)
class GateResult:
    checks: Tuple[GateCheck, ...]

    @property
    def overall_pass(self) -> bool:
        return all(check.status == GateStatus.PASS for check in self.checks)

    def check(self, name: str) -> GateCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_record(self) -> Dict[str, Any]:
        return {"overall_pass": self.overall_pass, "gates": [check.to_record() for check in self.checks]}

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "GateResult":
        return cls(
            checks=tuple(
                GateCheck(
                    name=gate["name"],
                    threshold=float(gate["threshold"]),
                    value=float(gate["value"]),
                    strict=gate["comparison"] == ">",
                    status=GateStatus(gate["status"]),
                )
                for gate in record["gates"]
            )
        )


def _check(name: str, value: float, threshold: float, strict: bool = False) -> GateCheck:
    passed = value > threshold if strict else value >= threshold
    return GateCheck(name, threshold, value, strict, GateStatus.PASS if passed else GateStatus.FAIL)


def evaluate_gates(metrics: SignalMetrics, thresholds: GateThresholds = GateThresholds()) -> GateResult:
    """
    Compare metrics with the adequacy thresholds.

    :param metrics: Signal metrics of a candidate.
    :param thresholds: Gate thresholds.
    :return: Per-gate outcome; overall pass is the conjunction.
    """
    return GateResult(
        checks=(
            _check("signal_coverage", metrics.signal_coverage, thresholds.signal_coverage_min),
            _check("ic_ir", metrics.ic_ir, thresholds.ic_ir_min),
            _check("quintile_spread", metrics.quintile_spread, thresholds.quintile_spread_min, strict=True),
            _check("hit_rate", metrics.hit_rate, thresholds.hit_rate_min),
        )
    )


def format_gate_table(result: GateResult, title: str = "Gate Summary") -> str:
    """Render a gate result as an aligned text table with a pass/fail tally."""
    width = max(len(check.name) for check in result.checks)
    counter = Counter(check.status for check in result.checks)
    text = f"\n{title}\n-------------------------------------\n"
    for check in result.checks:
        comparison = ">" if check.strict else ">="
        row = f"{check.value:+.4f} {comparison} {check.threshold:+.4f}"
        text += f"{check.name.ljust(width + 5)}{row}  {check.status.value}\n"
    text += f"    Gates: {len(result.checks)}, Passed: {counter[GateStatus.PASS]}, Failed: {counter[GateStatus.FAIL]}"
    return text
