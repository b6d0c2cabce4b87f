#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import itertools
import math

import numpy as np
import pytest
from conftest import day_list, make_market, make_panel

from aws.alphalab.extract import oracle_panel
from aws.alphalab.metrics import (
    CompositeWeights,
    DegenerateInput,
    EmptySeries,
    HorizonError,
    ICReport,
    NoSignal,
    ReturnPanel,
    SignalMetrics,
    brier,
    bucket_sizes,
    composite,
    compute_signal_metrics,
    daily_ic_series,
    feature_distribution,
    feature_ic_table,
    forward_returns,
    hit_rate,
    ic_decay,
    ic_summary,
    quintile_spread,
    signal_coverage,
    spearman,
    t_stat_from_ir,
    write_decay_csv,
)


def _rets(values, horizon=1):
    values = np.atleast_2d(np.asarray(values, dtype=float))
    tickers = tuple(f"T{j}" for j in range(values.shape[1]))
    return ReturnPanel(horizon_days=horizon, dates=tuple(day_list(values.shape[0])), tickers=tickers, values=values)


def _brute_spearman(xs, ys):
    def mid_ranks(values):
        order = sorted(values)
        return [sum(i + 1 for i, v in enumerate(order) if v == x) / order.count(x) for x in values]

    return float(np.corrcoef(mid_ranks(xs), mid_ranks(ys))[0, 1])


@pytest.fixture(scope="module")
def planted(small_scenario):
    config, scenario = small_scenario
    market = scenario.market
    panel = oracle_panel(scenario.events, market.dates, market.tickers, market.macro_series)
    return market, panel


def test_forward_returns_formula():
    """
    Test Case: A close moving from 100 to 105 gives ln(1.05) and the last horizon days are undefined
    """
    rets = forward_returns(make_market([100.0, 105.0, 105.0]), 1)

    assert rets.values[0, 0] == pytest.approx(math.log(1.05))
    assert rets.values[1, 0] == 0.0
    assert math.isnan(rets.values[2, 0])


def test_forward_returns_horizon_error():
    """
    Test Case: Failed to compute returns over a horizon as long as the sample
    """
    with pytest.raises(HorizonError):
        forward_returns(make_market([100.0, 101.0, 102.0]), 3)
    with pytest.raises(HorizonError):
        forward_returns(make_market([100.0, 101.0, 102.0]), 0)


def test_spearman_examples():
    """
    Test Case: Identity gives 1, reversal gives -1 and a hand-computed case gives -0.5
    """
    assert spearman([1.0, 2.0, 3.0, 4.0], [1.0, 2.0, 3.0, 4.0]) == pytest.approx(1.0)
    assert spearman([1.0, 2.0, 3.0, 4.0], [4.0, 3.0, 2.0, 1.0]) == pytest.approx(-1.0)
    assert spearman([0.1, 0.5, 0.3], [0.02, 0.01, 0.03]) == pytest.approx(-0.5)


def test_spearman_degenerate():
    """
    Test Case: Failed on a constant side or fewer than three pairs
    """
    with pytest.raises(DegenerateInput):
        spearman([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(DegenerateInput):
        spearman([1.0, 2.0], [1.0, 2.0])


def test_spearman_matches_brute_force_with_ties():
    """
    Test Case: Random small samples with ties agree with a mid-rank Pearson oracle
    """
    rng = np.random.default_rng(1)
    for _ in range(200):
        n = int(rng.integers(3, 11))
        xs = rng.integers(0, 4, size=n).astype(float).tolist()
        ys = rng.integers(0, 4, size=n).astype(float).tolist()
        if len(set(xs)) < 2 or len(set(ys)) < 2:
            continue
        assert spearman(xs, ys) == pytest.approx(_brute_spearman(xs, ys), abs=1e-12)


def test_spearman_monotone_invariance():
    """
    Test Case: A strictly monotone transform of either side leaves the coefficient unchanged
    """
    rng = np.random.default_rng(2)
    xs, ys = rng.normal(size=20), rng.normal(size=20)

    assert spearman(np.exp(xs), ys ** 3) == pytest.approx(spearman(xs, ys), abs=1e-12)


def test_daily_ic_series_skips_degenerate_days():
    """
    Test Case: Only the day whose feature equals its forward returns qualifies, with IC 1.0
    """
    closes = np.array([[100, 100, 100, 100, 100], [101, 103, 99, 102, 100], [101, 103, 99, 102, 100]], dtype=float)
    market = make_market(closes)
    rets = forward_returns(market, 1)
    sentiment = np.zeros_like(closes)
    sentiment[0] = rets.values[0]

    series = daily_ic_series("sentiment", make_panel(sentiment), rets)

    assert len(series) == 1
    assert series[0][0] == market.dates[0]
    assert series[0][1] == pytest.approx(1.0)
    assert series.skipped_days == 2


def test_daily_ic_series_empty():
    """
    Test Case: Failed when no day has enough names
    """
    market = make_market(np.full((3, 3), 100.0))

    with pytest.raises(EmptySeries):
        daily_ic_series("sentiment", make_panel(np.full((3, 3), 0.5)), forward_returns(market, 1))


def test_ic_summary_hand_computed():
    """
    Test Case: Daily ICs 0.1, 0.0, 0.2 give mean 0.1, std 0.1, ir 1 and t sqrt(3)
    """
    days = day_list(3)

    report = ic_summary(list(zip(days, [0.1, 0.0, 0.2])))

    assert report.ic_mean == pytest.approx(0.1)
    assert report.ic_std == pytest.approx(0.1)
    assert report.ic_ir == pytest.approx(1.0)
    assert report.t_stat == pytest.approx(math.sqrt(3))
    assert report.pct_positive == pytest.approx(2 / 3)


def test_ic_summary_degenerate():
    """
    Test Case: Failed on a series with zero dispersion or a single day
    """
    days = day_list(3)

    with pytest.raises(DegenerateInput):
        ic_summary(list(zip(days, [0.1, 0.1, 0.1])))
    with pytest.raises(DegenerateInput):
        ic_summary([(days[0], 0.1)])


@pytest.mark.parametrize("value",[0.1, 0.2, -0.03, 1.0 / 3.0])
def test_ic_summary_constant_inexact_values(value):
    """
    Test Case: Failed on a constant series whose value has no exact binary form
    """
    with pytest.raises(DegenerateInput):
        ic_summary(list(zip(day_list(4), [value] * 4)))


@pytest.mark.parametrize("ic_ir,expected", [(0.093, 1.00), (0.233, 2.52)])
def test_t_stat_identity(ic_ir, expected):
    """
    Test Case: t-stat equals ic_ir times sqrt(117)
    """
    assert t_stat_from_ir(ic_ir, 117) == pytest.approx(expected, abs=0.01)


def test_hit_rate_examples():
    """
    Test Case: Sign table over non-zero sentiment cells gives 2/3; zero returns are misses
    """
    assert hit_rate(make_panel([[0.5, -0.2, 0.0, 0.3]]), _rets([[0.01, 0.02, -0.01, 0.04]])) == pytest.approx(2 / 3)
    assert hit_rate(make_panel([[0.5, -0.2]]), _rets([[0.01, -0.02]])) == 1.0
    assert hit_rate(make_panel([[0.5, 0.2]]), _rets([[0.0, 0.01]])) == 0.5
    with pytest.raises(NoSignal):
        hit_rate(make_panel([[0.0, 0.0]]), _rets([[0.01, 0.02]]))


def test_quintile_spread_examples():
    """
    Test Case: Singleton buckets give top minus bottom; anti-alignment flips the sign; equal returns give 0
    """
    feature = [[0.5, 0.4, 0.3, 0.2, 0.1]]

    assert quintile_spread(make_panel(feature), _rets([[0.05, 0.04, 0.03, 0.02, 0.01]])) == pytest.approx(0.04)
    assert quintile_spread(make_panel(feature), _rets([[0.01, 0.02, 0.03, 0.04, 0.05]])) == pytest.approx(-0.04)
    assert quintile_spread(make_panel(feature), _rets([[0.02] * 5])) == 0.0
    with pytest.raises(NoSignal):
        quintile_spread(make_panel([[0.1, 0.2, 0.3]]), _rets([[0.01, 0.02, 0.03]]))


def test_bucket_sizes_remainder_order():
    """
    Test Case: Extra names fill the middle buckets before the extremes
    """
    assert bucket_sizes(5) == (1, 1, 1, 1, 1)
    assert bucket_sizes(6) == (1, 1, 2, 1, 1)
    assert bucket_sizes(8) == (1, 2, 2, 2, 1)
    assert bucket_sizes(9) == (2, 2, 2, 2, 1)


def test_quintile_spread_maximal_when_aligned():
    """
    Test Case: A feature equal to the returns beats every permutation of itself
    """
    returns = [0.03, -0.01, 0.02, 0.05, -0.04, 0.01]
    best = quintile_spread(make_panel([returns]), _rets([returns]))

    assert best >= 0
    for perm in itertools.permutations(returns):
        assert quintile_spread(make_panel([list(perm)]), _rets([returns])) <= best + 1e-15


def test_brier_examples():
    """
    Test Case: A perfect forecast scores 0, a confident miss 0.9025, and impact 0 is uninformed
    """
    assert brier(make_panel([[0.5]], impact=[[1.0]]), _rets([[0.01]])) == 0.0
    assert brier(make_panel([[0.8]], impact=[[0.9]]), _rets([[-0.01]])) == pytest.approx(0.9025)
    assert brier(make_panel([[0.5, -0.5]], impact=[[0.0, 0.0]]), _rets([[0.01, 0.02]])) == pytest.approx(0.25)


def test_signal_coverage():
    """
    Test Case: 3 of 4 non-zero cells give 0.75 and an all-zero panel gives 0
    """
    assert signal_coverage(make_panel([[0.1, 0.2], [0.0, -0.3]])) == 0.75
    assert signal_coverage(make_panel([[0.0, 0.0]])) == 0.0


def _metrics(ic_ir, hit, spread, brier_score=0.2):
    report = ICReport(daily_ics=(), n_days=117, ic_mean=0.0, ic_std=1.0, ic_ir=ic_ir, t_stat=0.0, pct_positive=0.5)
    return SignalMetrics(ic_report=report, hit_rate=hit, quintile_spread=spread, brier=brier_score, signal_coverage=0.4)


def test_composite_default_weights():
    """
    Test Case: Neutral inputs score 0 and the documented inputs score 0.2024
    """
    assert composite(_metrics(0.0, 0.5, 0.0)) == pytest.approx(0.0)
    assert composite(_metrics(0.104, 0.714, 0.0022)) == pytest.approx(0.2024)


def test_composite_linear_in_weights():
    """
    Test Case: Doubling every weight doubles the score
    """
    metrics = _metrics(0.2, 0.6, 0.01)
    weights = CompositeWeights(ic_ir=0.5, hit=0.3, spread=0.2, brier=0.1)
    doubled = CompositeWeights(ic_ir=1.0, hit=0.6, spread=0.4, brier=0.2)

    assert composite(metrics, doubled) == pytest.approx(2 * composite(metrics, weights))


def test_compute_signal_metrics_recovers_planted_alpha(planted):
    """
    Test Case: Noiseless oracle sentiment on a planted market has a positive IC with t-stat above 3
    """
    market, panel = planted

    metrics = compute_signal_metrics(panel, market, horizon_days=5)

    assert metrics.ic_report.t_stat > 3
    assert metrics.hit_rate > 0.5
    assert metrics.quintile_spread > 0
    assert 0.0 <= metrics.brier <= 1.0
    assert metrics.undefined == ()
    assert metrics.composite == pytest.approx(composite(metrics))
    assert metrics.to_record()["weights"]["ic_ir"] == 0.5


def test_compute_signal_metrics_without_signal():
    """
    Test Case: An all-zero panel has undefined metrics with neutral-or-worse fallbacks
    """
    market = make_market(100.0 + np.arange(60).reshape(10, 6))
    panel = make_panel(np.zeros((10, 6)))

    metrics = compute_signal_metrics(panel, market, horizon_days=2)

    assert metrics.ic_report is None
    assert set(metrics.undefined) == {"ic", "hit_rate", "quintile_spread", "brier"}
    assert metrics.brier == 0.25
    assert metrics.signal_coverage == 0.0


def test_ic_decay_peaks_near_event_horizon(planted):
    """
    Test Case: With five-day planted drift the IC peaks between 3 and 10 days and is lower at 20 than at 5
    """
    market, panel = planted

    decay = dict(ic_decay("sentiment", panel, market, [1, 2, 3, 5, 10, 15, 20]))

    peak = max(decay, key=lambda h: decay[h].ic_mean)
    assert 3 <= peak <= 10
    assert decay[20].ic_mean < decay[5].ic_mean


def test_ic_decay_constant_feature_undefined(planted, tmp_path):
    """
    Test Case: A constant feature is undefined at every horizon and written as empty rows
    """
    market, panel = planted

    decay = ic_decay("vix", panel, market, [1, 3, 5])

    assert [report for _, report in decay] == [None, None, None]
    text = write_decay_csv(tmp_path / "decay.csv", decay).read_text()
    assert text.splitlines() == ["horizon,ic_mean,ic_ir,t_stat,n", "1,,,,0", "3,,,,0", "5,,,,0"]
    with pytest.raises(ValueError):
        ic_decay("sentiment", panel, market, [5, 1])


def test_feature_ic_table_macro_rows_empty(planted):
    """
    Test Case: Macro features carry no statistics while sentiment carries a positive IC
    """
    market, panel = planted

    rows = {row.feature: row for row in feature_ic_table(panel, forward_returns(market, 5))}

    assert rows["sentiment"].ic_mean > 0
    assert rows["vix"].ic_mean is None and rows["vix"].n == 0
    assert rows["sentiment"].t_stat == pytest.approx(rows["sentiment"].ic_ir * math.sqrt(rows["sentiment"].n))


def test_feature_distribution():
    """
    Test Case: Distribution rows report mean, range and non-zero share
    """
    rows = {row.feature: row for row in feature_distribution(make_panel([[0.5, -0.5, 0.0, 0.0]]))}

    assert rows["sentiment"].mean == 0.0
    assert rows["sentiment"].pct_nonzero == 0.5
    assert (rows["sentiment"].min, rows["sentiment"].max) == (-0.5, 0.5)
    assert rows["vix"].mean == 16.0
