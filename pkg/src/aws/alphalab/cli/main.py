#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import csv
import logging
import sys
import traceback
from argparse import ArgumentParser
from dataclasses import replace
from datetime import date
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from gevent import monkey

from ..backfill.adapters import AdapterConfig, HttpSourceAdapter, S3ReplayAdapter, fetch_source
from ..backfill.calendar import TradingCalendar
from ..backfill.store import BackfillStore
from ..bench.ablation import run_ablation
from ..bench.baselines import buy_and_hold, snap_range
from ..bench.costs import cost_sweep
from ..bench.regime import regime_deltas, regime_split, vix_levels, write_regime_csv
from ..bench.report import mean_equity_curves, write_ablation_figures, write_equity_curves_csv
from ..bench.results import RunResult
from ..common.dates import DayRange, parse_date
from ..common.errors import AlphaLabError, ConfigError, UsageError
from ..common.io import atomic_write_json, atomic_write_text
from ..extract.cache import ExtractionCache
from ..extract.clients import build_client
from ..extract.extractor import extract_panel
from ..extract.macro import load_macro_csv
from ..extract.oracle import oracle_panel
from ..extract.prompts import load_template
from ..extract.ratelimit import TokenBucket
from ..extract.types import FeaturePanel
from ..metrics.ic import daily_ic_series, ic_decay
from ..metrics.quality import compute_signal_metrics
from ..metrics.returns import forward_returns
from ..metrics.tables import (
    feature_distribution,
    feature_ic_table,
    write_decay_csv,
    write_distribution_csv,
    write_feature_ic_csv,
    write_ic_series_csv,
)
from ..ppo.training import Checkpoint, run_policy_episode, train
from ..promptopt.errors import NoPass
from ..promptopt.gates import evaluate_gates, format_gate_table
from ..promptopt.loop import LoopConfig, optimize, validate_oos
from ..promptopt.proposers import RemoteMetaProposer, ScriptedProposer
from ..synthmarket.export import export_market
from ..synthmarket.generator import generate_scenario
from ..synthmarket.headlines import pseudo_headlines, read_events_jsonl, write_events_jsonl, write_replay_jsonl
from ..synthmarket.types import MarketData
from ..tradenv.config import FeatureMask
from ..tradenv.env import TradingEnv
from ..tradenv.normalizer import ObsNormalizer
from .config import ExperimentConfig
from .manifest import MANIFEST_NAME, RunManifest

# only network IO is cooperative; ablation workers are separate processes
monkey.patch_socket()
monkey.patch_ssl()

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_GATE = 3


class AlphaLabArgumentParser(ArgumentParser):
    """Argument parser that raises UsageError instead of exiting, so usage errors map onto exit code 1."""

    def error(self, message: str):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _window(start: Optional[str], end: Optional[str], default: Optional[DayRange], name: str) -> DayRange:
    if start and end:
        return DayRange.parse(start, end)
    if default is not None:
        return default
    raise UsageError(f"{name} needs --start and --end (or a range in the experiment config)")


def _market_window(market: MarketData, start: Optional[str], end: Optional[str]) -> DayRange:
    return DayRange(parse_date(start) if start else market.dates[0], parse_date(end) if end else market.dates[-1])


def _load_panel(path: Optional[str], manifest: RunManifest) -> Optional[FeaturePanel]:
    if not path:
        return None
    manifest.add_input(path)
    return FeaturePanel.load(path)


def _load_market(path: str, manifest: RunManifest) -> MarketData:
    manifest.add_input(path)
    return MarketData.load(path)


def _run_synth(args: Dict, config: ExperimentConfig, manifest: RunManifest) -> None:
    out = Path(args["out"])
    manifest.seeds = [config.synth.seed]
    scenario = generate_scenario(config.synth)
    export_market(scenario.market, out)
    manifest.add_output("market", out / "market.json")
    manifest.add_output("macro", out / "macro.csv")
    manifest.add_output("events", write_events_jsonl(out / "events.jsonl", scenario.events))
    manifest.add_output("replay", write_replay_jsonl(out / "replay.jsonl", pseudo_headlines(scenario.events)))
    logging.info(f"Synthesized {len(scenario.market.dates)} days x {len(scenario.market.tickers)} tickers")
    logging.info(f"Planted {len(scenario.events)} events")


def _store(
    args: Dict, config: ExperimentConfig, manifest: RunManifest, market: Optional[MarketData] = None
) -> BackfillStore:
    directory = args.get("store") or config.backfill.get("store")
    if not directory:
        raise UsageError("A backfill store directory is required (--store or [backfill] store)")
    if market is None and args.get("market"):
        market = _load_market(args["market"], manifest)
    if market is not None:
        calendar = TradingCalendar(market.dates)
    else:
        calendar = TradingCalendar.from_csv()
    return BackfillStore(directory, calendar)


def _run_ingest(args: Dict, config: ExperimentConfig, manifest: RunManifest) -> None:
    store = _store(args, config, manifest)
    if args.get("replay"):
        manifest.add_input(args["replay"])
        added = store.import_replay(args["replay"])
    else:
        window = _window(args.get("start"), args.get("end"), None, "ingest")
        if args.get("adapter") or config.backfill.get("adapter"):
            adapter_path = args.get("adapter") or config.backfill["adapter"]
            manifest.add_input(adapter_path)
            adapter = HttpSourceAdapter(AdapterConfig.from_file(adapter_path))
        elif args.get("s3_bucket") or config.backfill.get("s3_bucket"):
            bucket = args.get("s3_bucket") or config.backfill["s3_bucket"]
            adapter = S3ReplayAdapter(bucket, args.get("s3_prefix") or config.backfill.get("s3_prefix", ""))
        else:
            raise UsageError("ingest needs --replay, --adapter or --s3-bucket")
        added = store.put_items(fetch_source(adapter, window))
    logging.info(f"Ingested {added} new items; store holds {len(store)}")
    if store.log_path is not None:
        manifest.add_output("store_log", store.log_path)


def _run_extract(args: Dict, config: ExperimentConfig, manifest: RunManifest) -> None:
    out = Path(args["out"])
    market = _load_market(args["market"], manifest)
    window = _market_window(market, args.get("start"), args.get("end"))
    dates = [d for d in market.dates if window.contains(d)]
    universe = config.optimize.universe or market.tickers
    macro = market.macro_series
    if args.get("macro"):
        manifest.add_input(args["macro"])
        macro = load_macro_csv(args["macro"])
    manifest.seeds = [config.extractor.seed]
    if args.get("events"):
        manifest.add_input(args["events"])
        events = read_events_jsonl(args["events"])
        panel = oracle_panel(events, dates, universe, macro, config.extractor.noise_sigma, config.extractor.seed)
    else:
        template_path = args.get("template") or config.optimize.baseline
        manifest.add_input(template_path)
        store = _store(args, config, manifest, market)
        limiter = TokenBucket(config.extractor.rate_per_sec) if config.extractor.rate_per_sec else None
        panel = extract_panel(
            build_client(config.extractor),
            load_template(template_path),
            store.query_bundles(universe, window),
            macro,
            cache=ExtractionCache(out / "cache"),
            max_in_flight=config.extractor.max_in_flight,
            rate_limiter=limiter,
            failure_ceiling=config.extractor.failure_ceiling,
            max_attempts=config.extractor.max_attempts,
            backoff_s=config.extractor.backoff_s,
        )
    manifest.add_output("panel", panel.save(out / "panel.json"))
    logging.info(f"Extracted panel of {len(panel.dates)} days x {len(panel.tickers)} tickers")


def _run_metrics(args: Dict, config: ExperimentConfig, manifest: RunManifest) -> None:
    out = Path(args["out"])
    market = _load_market(args["market"], manifest)
    panel = _load_panel(args["panel"], manifest)
    horizon = args.get("horizon") or config.metrics.horizon_days
    min_names = config.metrics.min_names
    metrics = compute_signal_metrics(
        panel, market, horizon_days=horizon, weights=config.metrics.weights, feature=args["feature"], min_names=min_names
    )
    gates = evaluate_gates(metrics, config.gates)
    logging.info(format_gate_table(gates, title=f"Signal gates at horizon {horizon}"))
    report = {"metrics": metrics.to_record(), "gates": gates.to_record()}
    manifest.add_output("ic_report", atomic_write_json(out / "ic_report.json", report))
    rets = forward_returns(market, horizon)
    try:
        series = daily_ic_series(args["feature"], panel, rets, min_names=min_names)
        manifest.add_output("ic_series", write_ic_series_csv(out / "ic_series.csv", series))
    except AlphaLabError as err:
        logging.warning(f"No daily IC series for {args['feature']}: {err}")
    feature_rows = feature_ic_table(panel, rets, min_names=min_names)
    manifest.add_output("feature_ic", write_feature_ic_csv(out / "feature_ic.csv", feature_rows))
    manifest.add_output("distribution", write_distribution_csv(out / "distribution.csv", feature_distribution(panel)))
    decay = ic_decay(args["feature"], panel, market, _decay_horizons(market, config), min_names=min_names)
    manifest.add_output("decay", write_decay_csv(out / "decay.csv", decay))


def _decay_horizons(market: MarketData, config: ExperimentConfig) -> List[int]:
    return [h for h in config.metrics.decay_horizons if h < len(market.dates)]


def _run_optimize(args: Dict, config: ExperimentConfig, manifest: RunManifest) -> None:
    out = Path(args["out"])
    settings = config.optimize
    if settings.optimization_window is None or settings.oos_window is None:
        raise ConfigError("[optimize] needs optimization_window and oos_window")
    market = _load_market(args["market"], manifest)
    store = _store(args, config, manifest, market)
    if settings.proposer == "remote":
        proposer = RemoteMetaProposer(settings.meta)
    else:
        manifest.add_input(settings.prompt_dir)
        proposer = ScriptedProposer.from_directory(settings.prompt_dir, settings.mutation_pattern)
    ledger_path = out / "ledger.jsonl"
    loop = LoopConfig(
        optimization_window=settings.optimization_window,
        oos_window=settings.oos_window,
        universe=settings.universe,
        store=store,
        market=market,
        macro_source=market.macro_series,
        extractor=build_client(config.extractor),
        proposer=proposer,
        baseline=load_template(settings.baseline),
        max_rounds=settings.max_rounds,
        thresholds=config.gates,
        weights=config.metrics.weights,
        horizon_days=config.metrics.horizon_days,
        selection_rule=settings.selection_rule,
        min_names=config.metrics.min_names,
        cache=ExtractionCache(out / "cache"),
        ledger_path=ledger_path,
        max_in_flight=config.extractor.max_in_flight,
        failure_ceiling=config.extractor.failure_ceiling,
        max_attempts=config.extractor.max_attempts,
        backoff_s=config.extractor.backoff_s,
        rate_limiter=TokenBucket(config.extractor.rate_per_sec) if config.extractor.rate_per_sec else None,
    )
    manifest.add_output("ledger", ledger_path)
    frozen, _ = optimize(loop)
    manifest.add_output("frozen", atomic_write_json(out / "frozen.json", frozen.to_record()))
    manifest.add_output("frozen_template", atomic_write_text(out / "frozen_template.txt", frozen.template.body))
    oos = validate_oos(frozen, loop)
    manifest.add_output("oos_report", atomic_write_json(out / "oos_report.json", oos.to_record()))


def _mask(args: Dict, config: ExperimentConfig, key: str = "mask") -> FeatureMask:
    return FeatureMask(args.get(key) or config.env_config().feature_mask)


def _run_train(args: Dict, config: ExperimentConfig, manifest: RunManifest) -> None:
    out = Path(args["out"])
    market = _load_market(args["market"], manifest)
    panel = _load_panel(args.get("panel"), manifest)
    spec = config.ablation
    train_range = _window(args.get("start"), args.get("end"), spec.train if spec else None, "train")
    eval_range = _window(args.get("eval_start"), args.get("eval_end"), spec.validation if spec else None, "train")
    mask = _mask(args, config)
    base = replace(config.env_config(), feature_mask=mask)
    train_env = replace(base, episode=snap_range(market, train_range))
    eval_env = replace(base, episode=snap_range(market, eval_range))
    manifest.seeds = [args["seed"]]
    result = train(
        lambda: TradingEnv(train_env, market, panel),
        ObsNormalizer(train_env.width),
        config.ppo,
        args["seed"],
        eval_env_factory=lambda: TradingEnv(eval_env, market, panel),
        checkpoint_dir=out / "checkpoints",
    )
    for checkpoint in result.checkpoints:
        name = f"checkpoint_{checkpoint.timestep:08d}"
        manifest.add_output(name, out / "checkpoints" / f"{name}.json")
    manifest.add_output("learning_curve", out / "checkpoints" / "learning_curve.csv")


def _run_evaluate(args: Dict, config: ExperimentConfig, manifest: RunManifest) -> None:
    out = Path(args["out"])
    market = _load_market(args["market"], manifest)
    panel = _load_panel(args.get("panel"), manifest)
    manifest.add_input(args["checkpoint"])
    checkpoint = Checkpoint.load(args["checkpoint"])
    spec = config.ablation
    window = _window(args.get("start"), args.get("end"), spec.test if spec else None, "evaluate")
    env_config = replace(config.env_config(), feature_mask=_mask(args, config), episode=snap_range(market, window))
    env = TradingEnv(env_config, market, panel)
    episode = run_policy_episode(checkpoint.params, checkpoint.normalizer, env)
    equity = list(zip(env.dates, episode.values))
    curves = {"policy": equity}
    benchmark = config.bench.benchmark
    if benchmark in market.tickers:
        curves["buy_and_hold"] = buy_and_hold(market, benchmark, env_config.episode, env_config.initial_cash)
    manifest.seeds = [checkpoint.seed]
    manifest.add_output("equity", write_equity_curves_csv(out / "equity.csv", curves))
    manifest.add_output("trace", episode.write_trace_csv(out / "trace.csv"))
    summary = {
        label: RunResult.from_equity(label, checkpoint.seed, "evaluate", curve).to_record()
        for label, curve in curves.items()
    }
    manifest.add_output("evaluation", atomic_write_json(out / "evaluation.json", summary))


def _run_ablate(args: Dict, config: ExperimentConfig, manifest: RunManifest) -> None:
    out = Path(args["out"])
    if config.ablation is None:
        raise ConfigError("ablate needs an [ablation] section")
    market = _load_market(args["market"], manifest)
    panel = _load_panel(args.get("panel"), manifest)
    manifest.seeds = list(config.ablation.seeds)
    results = run_ablation(config.ablation, market, panel, config.ppo, config.env_config(), jobs=args["jobs"], out_dir=out)
    manifest.add_output("results", out / "ablation_results.csv")
    manifest.add_output("summary", out / "ablation_summary.json")
    for name, path in write_ablation_figures(results, out).items():
        manifest.add_output(name, path)
    curves = mean_equity_curves(results, "test")
    test_range = snap_range(market, config.ablation.test)
    if config.bench.benchmark in market.tickers:
        bench_curve = buy_and_hold(market, config.bench.benchmark, test_range, config.env_config().initial_cash)
        path = write_equity_curves_csv(out / "buy_and_hold_test.csv", {"buy_and_hold": bench_curve})
        manifest.add_output("buy_and_hold", path)
    if curves:
        rows = regime_split(curves, vix_levels(market), config.bench.vix_threshold, strict=False)
        manifest.add_output("regime", write_regime_csv(out / "regime.csv", rows))
        deltas = regime_deltas(rows, config.ablation.reference.value)
        manifest.add_output("regime_deltas", atomic_write_json(out / "regime_deltas.json", deltas))


def _run_cost_sweep(args: Dict, config: ExperimentConfig, manifest: RunManifest) -> None:
    out = Path(args["out"])
    market = _load_market(args["market"], manifest)
    panel = _load_panel(args.get("panel"), manifest)
    spec = config.ablation
    window = _window(args.get("start"), args.get("end"), spec.test if spec else None, "cost-sweep")
    policies = {}
    masks = {}
    for path_key, mask_key in (("checkpoint", "mask"), ("compare", "compare_mask")):
        if not args.get(path_key):
            continue
        manifest.add_input(args[path_key])
        checkpoint = Checkpoint.load(args[path_key])
        mask = _mask(args, config, mask_key)
        label = mask.value if mask.value not in policies else f"{mask.value}_{path_key}"
        policies[label] = (checkpoint.params, checkpoint.normalizer)
        masks[label] = mask
        manifest.seeds.append(checkpoint.seed)
    levels = [float(v) for v in args["levels"].split(",")] if args.get("levels") else config.bench.cost_levels
    env_config = replace(config.env_config(), episode=snap_range(market, window))
    sweep = cost_sweep(policies, env_config, market, panel, levels, masks=masks, mode=config.bench.cost_mode)
    manifest.add_output("cost_sweep", sweep.write_csv(out / "cost_sweep.csv"))


def _read_equity_csv(path: str) -> Dict[str, List[Tuple[date, float]]]:
    curves: Dict[str, List[Tuple[date, float]]] = {}
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for row in csv.DictReader(handle):
            day = parse_date(row.pop("date"))
            for label, value in row.items():
                if value:
                    curves.setdefault(label, []).append((day, float(value)))
    return curves


def _run_report(args: Dict, config: ExperimentConfig, manifest: RunManifest) -> None:
    out = Path(args["out"])
    market = _load_market(args["market"], manifest)
    if args.get("panel"):
        panel = _load_panel(args["panel"], manifest)
        decay = ic_decay("sentiment", panel, market, _decay_horizons(market, config), config.metrics.min_names)
        manifest.add_output("decay", write_decay_csv(out / "decay.csv", decay))
        rets = forward_returns(market, config.metrics.horizon_days)
        rows = feature_ic_table(panel, rets, min_names=config.metrics.min_names)
        manifest.add_output("feature_ic", write_feature_ic_csv(out / "feature_ic.csv", rows))
        manifest.add_output("distribution", write_distribution_csv(out / "distribution.csv", feature_distribution(panel)))
    if args.get("equity"):
        manifest.add_input(args["equity"])
        curves = _read_equity_csv(args["equity"])
        rows = regime_split(curves, vix_levels(market), config.bench.vix_threshold, strict=False)
        manifest.add_output("regime", write_regime_csv(out / "regime.csv", rows))
    if not args.get("panel") and not args.get("equity"):
        raise UsageError("report needs --panel and/or --equity")


HANDLERS: Dict[str, Callable[[Dict, ExperimentConfig, RunManifest], None]] = {
    "synth": _run_synth,
    "ingest": _run_ingest,
    "extract": _run_extract,
    "metrics": _run_metrics,
    "optimize": _run_optimize,
    "train": _run_train,
    "evaluate": _run_evaluate,
    "ablate": _run_ablate,
    "cost-sweep": _run_cost_sweep,
    "report": _run_report,
}


def build_parser() -> AlphaLabArgumentParser:
    parser = AlphaLabArgumentParser(prog="alphalab", description="News-signal research pipeline")
    parser.add_argument("-v", action="store_true", help="Log at INFO level")
    parser.add_argument("-vv", action="store_true", help="Log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str, market: bool = True) -> AlphaLabArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--config", help="Experiment TOML file")
        sub.add_argument("--out", default="out", help="Output directory")
        if market:
            sub.add_argument("--market", required=True, help="market.json written by synth")
        return sub

    command("synth", "Generate a synthetic market and planted events", market=False)

    ingest = command("ingest", "Import items into the backfill store", market=False)
    ingest.add_argument("--store", help="Backfill store directory")
    ingest.add_argument("--market", help="market.json whose dates form the trading calendar")
    ingest.add_argument("--replay", help="JSON-lines replay file")
    ingest.add_argument("--adapter", help="HTTP source adapter TOML")
    ingest.add_argument("--s3-bucket", dest="s3_bucket")
    ingest.add_argument("--s3-prefix", dest="s3_prefix")
    ingest.add_argument("--start")
    ingest.add_argument("--end")

    extract = command("extract", "Extract a feature panel")
    extract.add_argument("--store", help="Backfill store directory")
    extract.add_argument("--template", help="Prompt template file")
    extract.add_argument("--events", help="Planted events; builds the oracle panel directly")
    extract.add_argument("--macro", help="Macro CSV overriding the market's macro series")
    extract.add_argument("--start")
    extract.add_argument("--end")

    metrics = command("metrics", "Signal-quality metrics, feature IC table and IC decay")
    metrics.add_argument("--panel", required=True)
    metrics.add_argument("--horizon", type=int)
    metrics.add_argument("--feature", default="sentiment")

    opt = command("optimize", "Run the prompt mutation and selection loop")
    opt.add_argument("--store", help="Backfill store directory")

    train_cmd = command("train", "Train a PPO policy")
    train_cmd.add_argument("--panel")
    train_cmd.add_argument("--mask", choices=[m.value for m in FeatureMask])
    train_cmd.add_argument("--seed", type=int, default=0)
    for flag in ("--start", "--end", "--eval-start", "--eval-end"):
        train_cmd.add_argument(flag)

    evaluate = command("evaluate", "Evaluate a checkpoint on a range")
    evaluate.add_argument("--checkpoint", required=True)
    evaluate.add_argument("--panel")
    evaluate.add_argument("--mask", choices=[m.value for m in FeatureMask])
    evaluate.add_argument("--start")
    evaluate.add_argument("--end")

    ablate = command("ablate", "Multi-seed feature ablation")
    ablate.add_argument("--panel")
    ablate.add_argument("--jobs", type=int, default=1)

    sweep = command("cost-sweep", "Evaluate frozen policies across cost levels")
    sweep.add_argument("--checkpoint", required=True)
    sweep.add_argument("--compare", help="Second checkpoint to compare against")
    sweep.add_argument("--panel")
    sweep.add_argument("--mask", choices=[m.value for m in FeatureMask])
    sweep.add_argument("--compare-mask", dest="compare_mask", choices=[m.value for m in FeatureMask])
    sweep.add_argument("--levels", help="Comma-separated cost levels in basis points")
    sweep.add_argument("--start")
    sweep.add_argument("--end")

    report = command("report", "Assemble figure-data CSVs")
    report.add_argument("--panel")
    report.add_argument("--equity", help="Equity-curve CSV written by ablate or evaluate")

    rerun = commands.add_parser("rerun", help="Re-execute a recorded run and compare its outputs")
    rerun.add_argument("--manifest", required=True)
    return parser


def _rerun(manifest_path: str) -> int:
    recorded = RunManifest.load(manifest_path)
    logging.info(f"Rerunning {recorded.command}: {' '.join(recorded.argv)}")
    code = entry(recorded.argv)
    if code != EXIT_OK:
        return code
    fresh = RunManifest.load(Path(recorded.out_dir) / MANIFEST_NAME)
    changed = sorted(
        name for name, digest in recorded.output_sha256.items() if fresh.output_sha256.get(name) != digest
    )
    if changed:
        logging.error(f"Rerun outputs differ from the recorded run: {changed}")
        print(f"outputs differ: {', '.join(changed)}", file=sys.stderr)
        return EXIT_GATE
    logging.info(f"Rerun reproduced {len(recorded.output_sha256)} outputs")
    return EXIT_OK


def main(cmd_args: Dict, argv: Sequence[str] = ()) -> int:
    """
    Run one subcommand and write its manifest.

    :param cmd_args: Parsed arguments as a dict.
    :param argv: Raw argument vector, recorded in the manifest.
    :return: Process exit code.
    """
    if cmd_args.get("v"):
        logging.basicConfig(level=logging.INFO)
    if cmd_args.get("vv"):
        logging.basicConfig(level=logging.DEBUG)

    command = cmd_args["command"]
    if command == "rerun":
        return _rerun(cmd_args["manifest"])

    manifest = RunManifest.start(command, argv)
    out = Path(cmd_args["out"])
    try:
        config = ExperimentConfig.load(cmd_args.get("config"))
        if config.path is not None:
            manifest.config_sha256 = config.sha256
            manifest.add_input(config.path)
        out.mkdir(parents=True, exist_ok=True)
        HANDLERS[command](cmd_args, config, manifest)
    except UsageError as err:
        print(err, file=sys.stderr)
        return EXIT_USAGE
    except NoPass as err:
        logging.error(f"{err}")
        ledger = manifest.outputs.get("ledger")
        print(f"No candidate passed the gates; ledger: {ledger}", file=sys.stderr)
        manifest.finish(out)
        return EXIT_GATE
    except (AlphaLabError, OSError, ValueError) as err:
        logging.error(traceback.format_exc())
        print(f"{command} failed: {err}", file=sys.stderr)
        return EXIT_DATA
    path = manifest.finish(out)
    logging.info(f"Wrote manifest {path}")
    return EXIT_OK


def entry(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as err:
        print(err, file=sys.stderr)
        return EXIT_USAGE
    return main(vars(args), argv)


if __name__ == "__main__":
    sys.exit(entry())
