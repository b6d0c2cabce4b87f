#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from datetime import date
from pathlib import Path
from typing import Dict, Mapping, Sequence, Tuple, Union

from ..common.io import write_csv
from ..ppo.training import CurvePoint
from .ablation import AblationResults

EquityCurve = Sequence[Tuple[date, float]]


def write_equity_curves_csv(path: Union[str, Path], curves: Mapping[str, EquityCurve]) -> Path:
    """
    Write equity curves side by side, one column per label and one row per date in the union of dates. A label
    without a value on a date leaves the cell empty.
    """
    labels = list(curves)
    values: Dict[date, Dict[str, float]] = {}
    for label, curve in curves.items():
        for day, value in curve:
            values.setdefault(day, {})[label] = float(value)
    rows = [[day.isoformat()] + [values[day].get(label) for label in labels] for day in sorted(values)]
    return write_csv(path, ["date"] + labels, rows)


def write_convergence_csv(path: Union[str, Path], curves: Mapping[Tuple[str, int], Sequence[CurvePoint]]) -> Path:
    rows = [
        (config, seed, point.timestep, point.eval_sharpe, point.eval_return)
        for (config, seed), points in curves.items()
        for point in points
    ]
    return write_csv(path, ("config", "seed", "timestep", "eval_sharpe", "eval_return"), rows)


def mean_equity_curves(results: AblationResults, range_name: str) -> Dict[str, EquityCurve]:
    """Seed-averaged equity curve per configuration over the cells that evaluated successfully."""
    curves = {}
    for config in results.spec.configs:
        runs = [r for r in results.select(config, range_name).values() if r.ok and r.equity]
        if not runs:
            continue
        days = [d for d, _ in runs[0].equity]
        curves[config.value] = [(day, sum(r.equity[i][1] for r in runs) / len(runs)) for i, day in enumerate(days)]
    return curves


def write_ablation_figures(results: AblationResults, out_dir: Union[str, Path]) -> Dict[str, Path]:
    """Equity-curve CSVs per evaluation range and the convergence CSV of every training run."""
    out_dir = Path(out_dir)
    written = {
        f"equity_{name}": write_equity_curves_csv(out_dir / f"equity_{name}.csv", mean_equity_curves(results, name))
        for name in ("validation", "test")
    }
    written["convergence"] = write_convergence_csv(
        out_dir / "convergence.csv", {(o.mask.value, o.seed): o.curve for o in results.outcomes}
    )
    return written
