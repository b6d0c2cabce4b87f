#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ..common.io import write_csv
from ..extract.types import FeaturePanel
from ..ppo.network import PolicyParams
from ..ppo.training import run_policy_episode
from ..synthmarket.types import MarketData
from ..tradenv.config import EnvConfig
from ..tradenv.env import TradingEnv, replay_actions
from ..tradenv.normalizer import ObsNormalizer
from ..tradenv.performance import total_return
from .stats import safe_sharpe

DEFAULT_COST_LEVELS = (0.0, 5.0, 10.0, 20.0, 50.0)
SWEEP_MODES = ("replay", "policy")
FrozenPolicy = Tuple[PolicyParams, ObsNormalizer]


@dataclass(frozen=True)
class CostRow:
    cost_bp: float
    label: str
    sharpe: Optional[float]
    total_return_pct: float
    final_value: float
    costs: float


@dataclass
class CostSweep:
    """Rows per (cost level, policy) in level order; ``compare`` names the pair used for the win column."""

    levels: Tuple[float, ...]
    rows: List[CostRow]
    compare: Optional[Tuple[str, str]] = None

    def by_level(self, label: str) -> Dict[float, CostRow]:
        return {row.cost_bp: row for row in self.rows if row.label == label}

    def table(self) -> List[Dict[str, object]]:
        """One dict per level with each policy's Sharpe, the Sharpe difference and whether the first policy wins."""
        labels = list(dict.fromkeys(row.label for row in self.rows))
        table = []
        for level in self.levels:
            entry: Dict[str, object] = {"cost_bp": level}
            for label in labels:
                entry[f"{label}_sharpe"] = self.by_level(label)[level].sharpe
                entry[f"{label}_final_value"] = self.by_level(label)[level].final_value
            if self.compare is not None:
                a, b = (self.by_level(label)[level].sharpe for label in self.compare)
                entry["delta_sharpe"] = None if a is None or b is None else a - b
                entry["llm_win"] = None if a is None or b is None else a > b
            table.append(entry)
        return table

    def write_csv(self, path: Union[str, Path]) -> Path:
        table = self.table()
        header = list(table[0].keys())
        return write_csv(path, header, [[row[key] for key in header] for row in table])


def cost_sweep(
    policies: Mapping[str, FrozenPolicy],
    env_config: EnvConfig,
    market: MarketData,
    panel: Optional[FeaturePanel] = None,
    levels: Sequence[float] = DEFAULT_COST_LEVELS,
    masks: Optional[Mapping[str, object]] = None,
    mode: str = "replay",
) -> CostSweep:
    """
    Evaluate frozen policies at several proportional cost levels without retraining.

    In ``replay`` mode each policy's deterministic action trace is recorded once at the lowest level and replayed at
    every level, so trades are identical across rows. In ``policy`` mode the policy is rerun at each level and may
    react to the different cash path.

    :param policies: Label to (params, frozen normalizer); with two labels the first is compared against the second.
    :param env_config: Environment settings; ``cost_bp`` is replaced per level.
    :param market: Market data.
    :param panel: Feature panel for masks that need it.
    :param levels: Cost levels in basis points, ascending.
    :param masks: Feature mask per label; defaults to ``env_config.feature_mask``.
    :param mode: ``replay`` or ``policy``.
    :return: The sweep table.
    """
    levels = tuple(float(level) for level in levels)
    if list(levels) != sorted(levels) or not levels:
        raise ValueError(f"Cost levels must be ascending: {levels}")
    if mode not in SWEEP_MODES:
        raise ValueError(f"mode must be one of {SWEEP_MODES}")
    masks = masks or {}
    rows = []
    for label, (params, norm) in policies.items():
        base = replace(env_config, feature_mask=masks.get(label, env_config.feature_mask))
        trace = None
        for level in levels:
            env = TradingEnv(replace(base, cost_bp=level), market, panel)
            if mode == "policy" or trace is None:
                episode = run_policy_episode(params, norm, env)
                trace = episode.actions
            else:
                episode = replay_actions(env, trace)
            costs = episode.final.portfolio.cumulative_costs
            rows.append(
                CostRow(
                    cost_bp=level,
                    label=label,
                    sharpe=safe_sharpe(episode.values),
                    total_return_pct=100.0 * total_return(episode.values),
                    final_value=float(episode.values[-1]),
                    costs=float(costs),
                )
            )
            logging.info(f"Cost {level:g} bp, {label}: final value {episode.values[-1]:.2f}, costs {costs:.2f}")
    labels = list(policies)
    compare = (labels[0], labels[1]) if len(labels) == 2 else None
    return CostSweep(levels=levels, rows=rows, compare=compare)
