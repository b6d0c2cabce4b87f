#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import logging
import traceback
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ..common.dates import DayRange
from ..common.errors import ConfigError
from ..common.io import atomic_write_json, write_csv
from ..extract.types import FeaturePanel
from ..ppo.config import PPOConfig
from ..ppo.training import Checkpoint, CurvePoint, evaluate_policy, train
from ..synthmarket.types import MarketData
from ..tradenv.config import EnvConfig, FeatureMask, observation_width
from ..tradenv.env import TradingEnv
from ..tradenv.normalizer import ObsNormalizer
from .baselines import snap_range
from .errors import DegenerateDiffs
from .results import RESULTS_HEADER, RunResult
from .stats import mean_std, paired_t

DEFAULT_SEEDS = (0, 1, 2, 3, 42)
DEFAULT_CONFIGS = (FeatureMask.baseline, FeatureMask.llm_only, FeatureMask.macro_only, FeatureMask.full)
EVAL_RANGES = ("validation", "test")


@dataclass
class AblationSpec:
    """
    Feature-mask configurations crossed with seeds (``[ablation]`` section). Ranges are calendar ranges and must be
    disjoint and ordered train < validation < test.
    """

    train: DayRange
    validation: DayRange
    test: DayRange
    configs: Tuple[FeatureMask, ...] = DEFAULT_CONFIGS
    seeds: Tuple[int, ...] = DEFAULT_SEEDS
    reference: FeatureMask = FeatureMask.baseline

    def __post_init__(self):
        self.configs = tuple(FeatureMask(c) for c in self.configs)
        self.seeds = tuple(int(s) for s in self.seeds)
        self.reference = FeatureMask(self.reference)
        if not self.configs or not self.seeds:
            raise ConfigError("ablation needs at least one config and one seed")
        if len(set(self.seeds)) != len(self.seeds) or len(set(self.configs)) != len(self.configs):
            raise ConfigError("ablation configs and seeds must be unique")
        if not (self.train.end < self.validation.start and self.validation.end < self.test.start):
            raise ConfigError(f"Ranges must be ordered and disjoint: {self.train}, {self.validation}, {self.test}")

    @property
    def ranges(self) -> Dict[str, DayRange]:
        return {"train": self.train, "validation": self.validation, "test": self.test}

    @property
    def n_cells(self) -> int:
        return len(self.configs) * len(self.seeds)

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "AblationSpec":
        known = {"train", "validation", "test", "configs", "seeds", "reference"}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"Unknown [ablation] keys: {sorted(unknown)}")
        values = dict(values)
        for name in ("train", "validation", "test"):
            if name not in values:
                raise ConfigError(f"[ablation] needs a {name} range")
            values[name] = DayRange.parse(*values[name])
        return cls(**values)


@dataclass
class AblationCell:
    mask: FeatureMask
    seed: int
    market: MarketData
    panel: Optional[FeaturePanel]
    env_config: EnvConfig
    ppo_config: PPOConfig
    ranges: Dict[str, DayRange]


@dataclass
class CellOutcome:
    mask: FeatureMask
    seed: int
    results: List[RunResult]
    curve: List[CurvePoint] = field(default_factory=list)
    checkpoint: Optional[Checkpoint] = None


def _env(cell: AblationCell, range_name: str) -> TradingEnv:
    config = replace(cell.env_config, feature_mask=cell.mask, episode=snap_range(cell.market, cell.ranges[range_name]))
    return TradingEnv(config, cell.market, cell.panel)


def run_cell(cell: AblationCell) -> CellOutcome:
    """
    Train one (configuration, seed) policy on the train range and evaluate the final checkpoint, frozen and
    deterministic, on the validation and test ranges. Failures are returned as ``failed`` results.
    """
    label = cell.mask.value
    try:
        width = observation_width(len(cell.env_config.universe), cell.mask)
        result = train(
            lambda: _env(cell, "train"),
            ObsNormalizer(width),
            cell.ppo_config,
            cell.seed,
            eval_env_factory=lambda: _env(cell, "validation"),
        )
        final = result.final
        results = [
            RunResult.from_equity(label, cell.seed, name, evaluate_policy(final.params, final.normalizer, _env(cell, name)))
            for name in EVAL_RANGES
        ]
        return CellOutcome(cell.mask, cell.seed, results, result.curve, final)
    except Exception as err:
        logging.error(traceback.format_exc())
        logging.warning(f"Ablation cell {label}/seed {cell.seed} failed: {err}")
        error = f"{type(err).__name__}: {err}"
        return CellOutcome(cell.mask, cell.seed, [RunResult.failed(label, cell.seed, name, error) for name in EVAL_RANGES])


@dataclass
class AblationResults:
    """Per-cell evaluations in (configuration, seed, range) order, plus per-cell learning curves and checkpoints."""

    spec: AblationSpec
    n_tickers: int
    outcomes: List[CellOutcome]

    @property
    def results(self) -> List[RunResult]:
        return [r for outcome in self.outcomes for r in outcome.results]

    def select(self, config: Union[str, FeatureMask], range_name: str) -> Dict[int, RunResult]:
        label = FeatureMask(config).value
        return {r.seed: r for r in self.results if r.config == label and r.range_name == range_name}

    def checkpoint(self, config: Union[str, FeatureMask], seed: int) -> Optional[Checkpoint]:
        for outcome in self.outcomes:
            if outcome.mask == FeatureMask(config) and outcome.seed == seed:
                return outcome.checkpoint
        return None

    def _paired(self, config: FeatureMask, range_name: str) -> Dict[str, Any]:
        a, b = self.select(config, range_name), self.select(self.spec.reference, range_name)
        # only seeds that both configurations evaluated with a defined Sharpe are paired
        seeds = [s for s in self.spec.seeds if s in a and s in b and a[s].sharpe is not None and b[s].sharpe is not None]
        if len(seeds) < 2:
            return {"status": "undefined", "reason": f"{len(seeds)} paired seeds"}
        try:
            test = paired_t([a[s].sharpe for s in seeds], [b[s].sharpe for s in seeds])
        except DegenerateDiffs as err:
            return {"status": "undefined", "reason": str(err)}
        return {"status": "ok", "seeds": seeds, **test.to_record()}

    def summary(self) -> Dict[str, Any]:
        """Mean and std per configuration and range, Sharpe deltas and paired tests against the reference."""
        summary: Dict[str, Any] = {
            "seeds": list(self.spec.seeds),
            "reference": self.spec.reference.value,
            "ranges": {name: str(r) for name, r in self.spec.ranges.items()},
            "failed_cells": sum(1 for o in self.outcomes if any(not r.ok for r in o.results)),
            "results": {},
        }
        for range_name in EVAL_RANGES:
            reference = mean_std([r.sharpe for r in self.select(self.spec.reference, range_name).values()])
            table = {}
            for config in self.spec.configs:
                cell = self.select(config, range_name).values()
                sharpe_stats = mean_std([r.sharpe for r in cell])
                row = {
                    "n_feats": observation_width(self.n_tickers, config),
                    "sharpe": sharpe_stats,
                    "return_pct": mean_std([r.total_return_pct for r in cell]),
                    "maxdd_pct": mean_std([r.max_drawdown_pct for r in cell]),
                }
                if config != self.spec.reference:
                    if sharpe_stats["mean"] is not None and reference["mean"] is not None:
                        row["delta_sharpe"] = sharpe_stats["mean"] - reference["mean"]
                    else:
                        row["delta_sharpe"] = None
                    row["paired_t"] = self._paired(config, range_name)
                table[config.value] = row
            summary["results"][range_name] = table
        return summary

    def write(self, out_dir: Union[str, Path]) -> Dict[str, Path]:
        out_dir = Path(out_dir)
        return {
            "results_csv": write_results_csv(out_dir / "ablation_results.csv", self.results),
            "summary_json": atomic_write_json(out_dir / "ablation_summary.json", self.summary()),
        }


def write_results_csv(path: Union[str, Path], results: Sequence[RunResult]) -> Path:
    return write_csv(path, RESULTS_HEADER, [r.row() for r in results])


def _fmt_stats(stats: Dict[str, Optional[float]]) -> str:
    return "n/a" if stats["mean"] is None else f"{stats['mean']:+.3f} ± {stats['std']:.3f}"


def format_ablation_table(results: AblationResults, range_name: str = "validation") -> str:
    """Sharpe, return and drawdown means per configuration as an aligned text table."""
    summary = results.summary()
    text = f"\nAblation ({range_name}, N={len(results.spec.seeds)})\n-------------------------------------\n"
    for label, row in summary["results"][range_name].items():
        delta = row.get("delta_sharpe")
        delta_text = "" if delta is None else f"  dSharpe {delta:+.3f}"
        text += (
            f"{label.ljust(12)}feats {row['n_feats']:>4}  Sharpe {_fmt_stats(row['sharpe'])}"
            f"  Return% {_fmt_stats(row['return_pct'])}  MaxDD% {_fmt_stats(row['maxdd_pct'])}{delta_text}\n"
        )
    text += f"    Cells: {results.spec.n_cells}, Failed: {summary['failed_cells']}"
    return text


def run_ablation(
    spec: AblationSpec,
    market: MarketData,
    panel: Optional[FeaturePanel],
    ppo_config: PPOConfig,
    env_config: EnvConfig,
    jobs: int = 1,
    out_dir: Optional[Union[str, Path]] = None,
) -> AblationResults:
    """
    Train and evaluate every (configuration, seed) cell. Cells run in separate processes when ``jobs`` > 1; the
    assembled results are ordered by configuration then seed, independent of completion order. With ``out_dir``
    the results CSV is rewritten after every finished cell so an interrupted run leaves partial results.

    :param spec: Configurations, seeds and ranges.
    :param market: Market covering the ranges and the indicator warm-up.
    :param panel: Feature panel covering the train, validation and test ranges; None only for baseline-only runs.
    :param ppo_config: PPO hyperparameters shared by every cell.
    :param env_config: Environment settings; the mask and episode are set per cell.
    :param jobs: Worker processes.
    :param out_dir: Output directory for results CSV and summary JSON.
    :return: Assembled results.
    """
    cells = [
        AblationCell(mask, seed, market, panel, env_config, ppo_config, spec.ranges)
        for mask in spec.configs
        for seed in spec.seeds
    ]
    order = {(cell.mask, cell.seed): i for i, cell in enumerate(cells)}
    done: Dict[int, CellOutcome] = {}

    def record(outcome: CellOutcome):
        done[order[(outcome.mask, outcome.seed)]] = outcome
        logging.info(f"Ablation cell {outcome.mask.value}/seed {outcome.seed} finished ({len(done)}/{len(cells)})")
        if out_dir is not None:
            partial = [r for i in sorted(done) for r in done[i].results]
            write_results_csv(Path(out_dir) / "ablation_results.csv", partial)

    logging.info(f"Running {len(cells)} ablation cells with {jobs} job(s)")
    if jobs <= 1:
        for cell in cells:
            record(run_cell(cell))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(run_cell, cell) for cell in cells]
            for future in as_completed(futures):
                record(future.result())

    results = AblationResults(spec, len(env_config.universe), [done[i] for i in range(len(cells))])
    logging.info(format_ablation_table(results))
    if out_dir is not None:
        results.write(out_dir)
    return results
