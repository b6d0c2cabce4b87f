#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass, field
from datetime import date
from typing import Any, Dict, Optional, Sequence, Tuple

from ..tradenv.performance import max_drawdown, total_return
from .stats import safe_sharpe


@dataclass(frozen=True)
class RunResult:
    """
    One evaluation of one trained policy on one range. ``sharpe`` is None when the return series is constant;
    ``status`` is ``failed`` (with ``error``) when the cell could not be trained or evaluated.
    """

    config: str
    seed: int
    range_name: str
    sharpe: Optional[float]
    total_return_pct: Optional[float]
    max_drawdown_pct: Optional[float]
    equity: Tuple[Tuple[date, float], ...] = field(default=(), compare=False, repr=False)
    status: str = "ok"
    error: str = ""

    def __post_init__(self):
        if self.max_drawdown_pct is not None and not 0.0 <= self.max_drawdown_pct <= 100.0:
            raise ValueError(f"max_drawdown_pct {self.max_drawdown_pct} outside [0, 100]")

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @classmethod
    def from_equity(cls, config: str, seed: int, range_name: str, equity: Sequence[Tuple[date, float]]) -> "RunResult":
        values = [v for _, v in equity]
        return cls(
            config=config,
            seed=seed,
            range_name=range_name,
            sharpe=safe_sharpe(values),
            total_return_pct=100.0 * total_return(values),
            max_drawdown_pct=100.0 * max_drawdown(values),
            equity=tuple(equity),
        )

    @classmethod
    def failed(cls, config: str, seed: int, range_name: str, error: str) -> "RunResult":
        return cls(config, seed, range_name, None, None, None, status="failed", error=error)

    def row(self) -> Tuple[Any, ...]:
        return (
            self.config,
            self.seed,
            self.range_name,
            self.sharpe,
            self.total_return_pct,
            self.max_drawdown_pct,
            self.status,
        )

    def to_record(self) -> Dict[str, Any]:
        return {
            "config": self.config,
            "seed": self.seed,
            "range": self.range_name,
            "sharpe": self.sharpe,
            "return_pct": self.total_return_pct,
            "maxdd_pct": self.max_drawdown_pct,
            "status": self.status,
            "error": self.error,
        }


RESULTS_HEADER = ("config", "seed", "range", "sharpe", "return_pct", "maxdd_pct", "status")
