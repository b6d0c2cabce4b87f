#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import csv
import json
from datetime import date
from pathlib import Path

import numpy as np
import pytest
from conftest import day_list, make_market, make_panel

from aws.alphalab.bench import (
    HIGH_VOL,
    LOW_VOL,
    AblationSpec,
    DegenerateDiffs,
    EmptyRegime,
    RunResult,
    UnknownTicker,
    buy_and_hold,
    cost_sweep,
    format_ablation_table,
    mean_equity_curves,
    paired_t,
    regime_deltas,
    regime_split,
    run_ablation,
    snap_range,
    student_t_two_sided_p,
    vix_levels,
    write_ablation_figures,
    write_equity_curves_csv,
    write_regime_csv,
)
from aws.alphalab.cli import ExperimentConfig
from aws.alphalab.common import ConfigError, DayRange
from aws.alphalab.extract import oracle_panel
from aws.alphalab.ppo import PolicyParams, PPOConfig
from aws.alphalab.synthmarket import SynthConfig, generate_market, generate_scenario
from aws.alphalab.tradenv import EnvConfig, ObsNormalizer, RangeError, observation_width

REPO_ROOT = Path(__file__).resolve().parents[1]
TICKERS = ("AAA", "BBB", "CCC")


def _read_csv(path):
    with open(path, newline="") as handle:
        return list(csv.reader(handle))


@pytest.mark.parametrize(
    "t_stat,df,expected",
    [(2.776, 4, 0.05), (0.7643, 4, 0.4873), (2.828, 4, 0.0474), (0.0, 9, 1.0), (12.706, 1, 0.05)],
)
def test_student_t_two_sided_p(t_stat, df, expected):
    """
    Test Case: Two-sided Student-t p-values match tabulated critical values
    """
    assert student_t_two_sided_p(t_stat, df) == pytest.approx(expected, abs=2e-3)


def test_paired_t_example():
    """
    Test Case: Differences 0.1, 0.3, 0.2, 0.0, 0.4 give t of about 2.83 on 4 degrees of freedom
    """
    result = paired_t([1.1, 1.3, 1.2, 1.0, 1.4], [1.0] * 5)

    assert result.t_stat == pytest.approx(2.828, abs=1e-3)
    assert result.df == 4
    assert result.mean_diff == pytest.approx(0.2)
    assert result.p_value == pytest.approx(0.047, abs=2e-3)
    assert paired_t([1.0] * 5, [1.1, 1.3, 1.2, 1.0, 1.4]).t_stat == pytest.approx(-result.t_stat)


def test_paired_t_failures():
    """
    Test Case: Failed to test constant differences, unequal lengths or a single pair
    """
    with pytest.raises(DegenerateDiffs):
        paired_t([1.5, 2.5, 3.5], [1.0, 2.0, 3.0])
    with pytest.raises(DegenerateDiffs):
        paired_t([0.3, 0.3, 0.3], [0.1, 0.1, 0.1])
    with pytest.raises(DegenerateDiffs):
        paired_t([1.3, 2.3, 3.3], [1.1, 2.1, 3.1])
    with pytest.raises(ValueError):
        paired_t([1.0, 2.0], [1.0])
    with pytest.raises(ValueError):
        paired_t([1.0], [2.0])


def test_buy_and_hold():
    """
    Test Case: Buy-and-hold invests the whole cash at the first close and tracks the price
    """
    market = make_market(np.array([[100.0, 50.0], [110.0, 50.0], [121.0, 25.0]]), tickers=("AAA", "BBB"))
    full = DayRange(market.dates[0], market.dates[-1])

    curve = buy_and_hold(market, "AAA", full)

    assert [v for _, v in curve] == pytest.approx([100_000.0, 110_000.0, 121_000.0])
    assert [d for d, _ in curve] == list(market.dates)
    assert buy_and_hold(market, "BBB", full, initial_cash=1_000.0)[-1][1] == pytest.approx(500.0)
    with pytest.raises(UnknownTicker):
        buy_and_hold(market, "ZZZ", full)
    with pytest.raises(RangeError):
        buy_and_hold(market, "AAA", DayRange.parse("2030-01-01", "2030-02-01"))


def test_snap_range():
    """
    Test Case: A calendar range snaps to the market days inside it
    """
    market = make_market(np.full(5, 10.0), dates=[date(2025, 1, d) for d in (2, 3, 6, 7, 8)])

    assert snap_range(market, DayRange.parse("2025-01-04", "2025-01-10")) == DayRange(date(2025, 1, 6), date(2025, 1, 8))


def test_run_result():
    """
    Test Case: Run results summarize an equity curve and reject impossible drawdowns
    """
    days = day_list(4)
    result = RunResult.from_equity("full", 1, "test", list(zip(days, [100.0, 120.0, 90.0, 110.0])))
    flat = RunResult.from_equity("baseline", 1, "test", list(zip(days, [100.0] * 4)))
    failed = RunResult.failed("full", 2, "test", "RangeError: boom")

    assert result.max_drawdown_pct == pytest.approx(25.0)
    assert result.total_return_pct == pytest.approx(10.0)
    assert flat.sharpe is None and flat.max_drawdown_pct == 0.0
    assert failed.row() == ("full", 2, "test", None, None, None, "failed")
    assert not failed.ok and failed.to_record()["error"] == "RangeError: boom"
    with pytest.raises(ValueError):
        RunResult("full", 0, "test", 1.0, 5.0, 150.0)


def test_ablation_spec_validation():
    """
    Test Case: Failed to build an ablation with overlapping ranges, duplicate seeds or unknown keys
    """
    ranges = {"train": ["2023-01-01", "2023-06-30"], "validation": ["2023-07-01", "2023-09-30"]}

    spec = AblationSpec.from_dict({**ranges, "test": ["2023-10-01", "2023-12-31"], "seeds": [0, 1]})

    assert spec.n_cells == 8
    assert spec.reference.value == "baseline"
    with pytest.raises(ConfigError):
        AblationSpec.from_dict({**ranges, "test": ["2023-09-15", "2023-12-31"]})
    with pytest.raises(ConfigError):
        AblationSpec.from_dict({**ranges, "test": ["2023-10-01", "2023-12-31"], "seeds": [1, 1]})
    with pytest.raises(ConfigError):
        AblationSpec.from_dict({**ranges, "test": ["2023-10-01", "2023-12-31"], "workers": 4})
    with pytest.raises(ConfigError):
        AblationSpec.from_dict(ranges)


@pytest.fixture(scope="module")
def ablation_market():
    return generate_market(SynthConfig(tickers=TICKERS, n_days=120, seed=21))


def _spec(market, configs, seeds=(0, 1)):
    dates = market.dates
    return AblationSpec(
        train=DayRange(dates[30], dates[69]),
        validation=DayRange(dates[70], dates[94]),
        test=DayRange(dates[95], dates[119]),
        configs=configs,
        seeds=seeds,
    )


SMALL_PPO = PPOConfig(
    total_timesteps=60, rollout_horizon=30, minibatch=15, epochs_per_update=1, checkpoint_every=60, hidden_sizes=(8, 8)
)


@pytest.fixture(scope="module")
def ablation(ablation_market, tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("ablation")
    panel = make_panel(np.zeros((len(ablation_market.dates), 3)), tickers=TICKERS, dates=ablation_market.dates)
    results = run_ablation(
        _spec(ablation_market, ("baseline", "full")),
        ablation_market,
        panel,
        SMALL_PPO,
        EnvConfig(universe=TICKERS),
        out_dir=out_dir,
    )
    return results, out_dir


def test_run_ablation_outputs(ablation):
    """
    Test Case: Every cell evaluates on validation and test, in configuration then seed order, with CSV and summary
    """
    results, out_dir = ablation

    assert [(r.config, r.seed, r.range_name) for r in results.results] == [
        (config, seed, name) for config in ("baseline", "full") for seed in (0, 1) for name in ("validation", "test")
    ]
    assert all(r.ok for r in results.results)
    assert results.checkpoint("full", 1).timestep == 60
    rows = _read_csv(out_dir / "ablation_results.csv")
    assert rows[0] == ["config", "seed", "range", "sharpe", "return_pct", "maxdd_pct", "status"]
    assert len(rows) == 9
    with open(out_dir / "ablation_summary.json") as handle:
        summary = json.load(handle)
    full = summary["results"]["validation"]["full"]
    assert full["n_feats"] == observation_width(3, "full") == 33
    assert "delta_sharpe" in full and "paired_t" in full
    assert "paired_t" not in summary["results"]["test"]["baseline"]
    assert summary["failed_cells"] == 0
    assert "Cells: 4, Failed: 0" in format_ablation_table(results)


def test_ablation_figures(ablation, tmp_path):
    """
    Test Case: Seed-averaged equity curves cover the evaluation range and the convergence CSV lists every run
    """
    results, _ = ablation

    curves = mean_equity_curves(results, "test")
    written = write_ablation_figures(results, tmp_path)

    assert set(curves) == {"baseline", "full"}
    assert curves["full"][0][1] == pytest.approx(100_000.0)
    assert len(_read_csv(written["equity_test"])) == len(curves["full"]) + 1
    assert len(_read_csv(written["convergence"])) == 1 + 4


def test_ablation_isolates_failed_cells(ablation_market):
    """
    Test Case: A configuration that cannot build its environment is reported failed while the others complete
    """
    results = run_ablation(
        _spec(ablation_market, ("baseline", "llm_only"), seeds=(3,)),
        ablation_market,
        None,
        SMALL_PPO,
        EnvConfig(universe=TICKERS),
    )

    assert [r.status for r in results.results] == ["ok", "ok", "failed", "failed"]
    assert results.select("llm_only", "test")[3].error.startswith("RangeError")
    assert results.summary()["failed_cells"] == 1
    assert results.summary()["results"]["test"]["llm_only"]["paired_t"]["status"] == "undefined"


@pytest.mark.slow
def test_ablation_parallel_matches_serial(ablation_market):
    """
    Test Case: Results do not depend on the number of worker processes
    """
    panel = make_panel(np.zeros((len(ablation_market.dates), 3)), tickers=TICKERS, dates=ablation_market.dates)
    spec = _spec(ablation_market, ("baseline", "macro_only"))

    serial = run_ablation(spec, ablation_market, panel, SMALL_PPO, EnvConfig(universe=TICKERS), jobs=1)
    parallel = run_ablation(spec, ablation_market, panel, SMALL_PPO, EnvConfig(universe=TICKERS), jobs=2)

    assert serial.results == parallel.results


def _regime_curves():
    days = day_list(5)
    return days, {
        "full": list(zip(days, [100.0, 101.0, 100.0, 102.0, 101.0])),
        "baseline": list(zip(days, [100.0, 100.5, 100.0, 100.5, 100.0])),
    }


def test_regime_split():
    """
    Test Case: Daily returns split by the VIX level on each return's day, high-vol first
    """
    days, curves = _regime_curves()
    vix = dict(zip(days, [30.0, 25.0, 20.0, 10.0, 15.0]))

    rows = regime_split(curves, vix)

    assert [(r.config, r.regime, r.n_days) for r in rows] == [
        ("full", "high_vol", 2),
        ("full", "low_vol", 2),
        ("baseline", "high_vol", 2),
        ("baseline", "low_vol", 2),
    ]
    assert rows[0].mean_return == pytest.approx((0.01 + (100.0 / 101.0 - 1.0)) / 2)
    assert set(regime_deltas(rows)) == {"full"}


def test_regime_split_empty_regime(tmp_path):
    """
    Test Case: Failed to split a calm-only period strictly; the lenient split keeps a row without statistics
    """
    days, curves = _regime_curves()
    calm = {d: 12.0 for d in days}

    with pytest.raises(EmptyRegime):
        regime_split(curves, calm)
    rows = regime_split(curves, calm, strict=False)

    assert rows[0].regime == "high_vol" and rows[0].n_days == 0 and rows[0].sharpe is None
    assert regime_deltas(rows)["full"]["high_vol"] is None
    lines = _read_csv(write_regime_csv(tmp_path / "regime.csv", rows))
    assert lines[1] == ["full", "high_vol", "0", "", "", ""]


@pytest.mark.slow
def test_regime_gap_scenario():
    """
    Test Case: With news alpha planted only in calm days and noise headlines in shock days, llm_only loses Sharpe
    against the baseline on high-VIX test days and gains on calm test days, averaged over five seeds
    """
    config = ExperimentConfig.load(REPO_ROOT / "configs" / "regime_gap.toml")
    scenario = generate_scenario(config.synth)
    market = scenario.market
    extractor = config.extractor
    panel = oracle_panel(
        scenario.events, market.dates, market.tickers, market.macro_series, extractor.noise_sigma, extractor.seed
    )

    results = run_ablation(config.ablation, market, panel, config.ppo, config.env_config(), jobs=4)
    rows = regime_split(mean_equity_curves(results, "test"), vix_levels(market), config.bench.vix_threshold)
    deltas = regime_deltas(rows, "baseline")["llm_only"]

    assert all(row.n_days >= 2 for row in rows)
    assert deltas[HIGH_VOL] < 0.0
    assert deltas[LOW_VOL] > 0.0


def _fixed_policy(width, action_index):
    params = PolicyParams.zeros(width, 3, (4, 4))
    params.bpi = np.tile(np.eye(3)[action_index], 3)
    return params, ObsNormalizer(width).frozen()


def test_cost_sweep(ablation_market, tmp_path):
    """
    Test Case: Raising the cost level lowers the final value of an identical trade trace, and an idle policy has
    undefined Sharpe
    """
    config = EnvConfig(universe=TICKERS, feature_mask="baseline", initial_cash=10_000_000.0)
    width = observation_width(3, "baseline")
    policies = {"buyer": _fixed_policy(width, 2), "idle": _fixed_policy(width, 1)}

    sweep = cost_sweep(policies, config, ablation_market)
    rerun = cost_sweep(policies, config, ablation_market, mode="policy")

    finals = [sweep.by_level("buyer")[level].final_value for level in sweep.levels]
    assert sweep.levels == (0.0, 5.0, 10.0, 20.0, 50.0)
    assert all(later < earlier for earlier, later in zip(finals, finals[1:]))
    assert sweep.by_level("buyer")[0.0].costs == 0.0
    assert [r.final_value for r in rerun.rows] == pytest.approx([r.final_value for r in sweep.rows])
    assert sweep.by_level("idle")[50.0].final_value == 10_000_000.0
    table = sweep.table()
    assert table[0]["delta_sharpe"] is None and table[0]["llm_win"] is None
    assert _read_csv(sweep.write_csv(tmp_path / "costs.csv"))[0][0] == "cost_bp"
    with pytest.raises(ValueError):
        cost_sweep(policies, config, ablation_market, levels=(10.0, 5.0))
    with pytest.raises(ValueError):
        cost_sweep(policies, config, ablation_market, mode="live")


def test_write_equity_curves_csv(tmp_path):
    """
    Test Case: Curves with different dates are written side by side with empty cells where a label has no value
    """
    days = day_list(3)
    curves = {"a": list(zip(days, [1.0, 2.0, 3.0])), "b": list(zip(days[1:], [5.0, 6.0]))}

    rows = _read_csv(write_equity_curves_csv(tmp_path / "equity.csv", curves))

    assert rows[0] == ["date", "a", "b"]
    assert rows[1] == [days[0].isoformat(), "1.0", ""]
    assert rows[3] == [days[2].isoformat(), "3.0", "6.0"]
