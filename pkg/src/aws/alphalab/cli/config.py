#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import toml

from ..bench.ablation import AblationSpec
from ..bench.costs import DEFAULT_COST_LEVELS
from ..bench.regime import DEFAULT_VIX_THRESHOLD
from ..common.dates import DayRange
from ..common.errors import ConfigError
from ..common.io import file_sha256
from ..common.universes import load_universe
from ..extract.config import ExtractorConfig
from ..extract.prompts import DEFAULT_PROMPT_DIR
from ..metrics.quality import CompositeWeights
from ..ppo.config import PPOConfig
from ..promptopt.gates import GateThresholds
from ..promptopt.proposers import MetaProposerConfig
from ..synthmarket.config import SynthConfig
from ..tradenv.config import EnvConfig

SECTIONS = ("synth", "backfill", "extractor", "metrics", "gates", "optimize", "env", "ppo", "ablation", "bench")
DEFAULT_DECAY_HORIZONS = (1, 2, 3, 5, 10, 15, 20)


def _reject_unknown(section: str, values: Mapping[str, Any], known) -> None:
    unknown = set(values) - set(known)
    if unknown:
        raise ConfigError(f"Unknown [{section}] keys: {sorted(unknown)}")


def _universe(value: Union[str, Any]) -> Tuple[str, ...]:
    """A universe is either the name of a packaged universe or an explicit ticker list."""
    if isinstance(value, str):
        return tuple(load_universe(value))
    return tuple(value)


@dataclass
class MetricsSettings:
    horizon_days: int = 5
    decay_horizons: Tuple[int, ...] = DEFAULT_DECAY_HORIZONS
    min_names: int = 5
    weights: CompositeWeights = field(default_factory=CompositeWeights)

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "MetricsSettings":
        _reject_unknown("metrics", values, {f.name for f in fields(cls)})
        values = dict(values)
        if "decay_horizons" in values:
            values["decay_horizons"] = tuple(int(h) for h in values["decay_horizons"])
        if "weights" in values:
            values["weights"] = CompositeWeights.from_dict(values["weights"])
        return cls(**values)


@dataclass
class OptimizeSettings:
    """``[optimize]``: windows, prompt sources and the proposer back end (``scripted`` or ``remote``)."""

    optimization_window: Optional[DayRange] = None
    oos_window: Optional[DayRange] = None
    universe: Tuple[str, ...] = ()
    baseline: Path = DEFAULT_PROMPT_DIR / "baseline.txt"
    prompt_dir: Path = DEFAULT_PROMPT_DIR
    mutation_pattern: str = "mut*.txt"
    max_rounds: int = 5
    selection_rule: str = "composite"
    proposer: str = "scripted"
    meta: Optional[MetaProposerConfig] = None

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "OptimizeSettings":
        _reject_unknown("optimize", values, {f.name for f in fields(cls)})
        values = dict(values)
        for name in ("optimization_window", "oos_window"):
            if name in values:
                values[name] = DayRange.parse(*values[name])
        for name in ("baseline", "prompt_dir"):
            if name in values:
                values[name] = Path(values[name])
        values["universe"] = _universe(values.get("universe", "signal"))
        if "meta" in values:
            values["meta"] = MetaProposerConfig.from_dict(values["meta"])
        settings = cls(**values)
        if settings.proposer not in ("scripted", "remote"):
            raise ConfigError("optimize.proposer must be scripted or remote")
        if settings.proposer == "remote" and settings.meta is None:
            raise ConfigError("optimize.proposer = remote needs an [optimize.meta] table")
        return settings


@dataclass
class BenchSettings:
    cost_levels: Tuple[float, ...] = DEFAULT_COST_LEVELS
    vix_threshold: float = DEFAULT_VIX_THRESHOLD
    benchmark: str = "SPY"
    cost_mode: str = "replay"

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "BenchSettings":
        _reject_unknown("bench", values, {f.name for f in fields(cls)})
        values = dict(values)
        if "cost_levels" in values:
            values["cost_levels"] = tuple(float(level) for level in values["cost_levels"])
        return cls(**values)


@dataclass
class ExperimentConfig:
    """
    One experiment file. Every section is optional; missing sections take their defaults. ``sha256`` is the hash
    of the file the config was read from (empty for in-memory configs).
    """

    synth: SynthConfig = field(default_factory=SynthConfig)
    backfill: Dict[str, Any] = field(default_factory=dict)
    extractor: ExtractorConfig = field(default_factory=ExtractorConfig)
    metrics: MetricsSettings = field(default_factory=MetricsSettings)
    gates: GateThresholds = field(default_factory=GateThresholds)
    optimize: OptimizeSettings = field(default_factory=OptimizeSettings)
    env: Optional[EnvConfig] = None
    ppo: PPOConfig = field(default_factory=PPOConfig)
    ablation: Optional[AblationSpec] = None
    bench: BenchSettings = field(default_factory=BenchSettings)
    sha256: str = ""
    path: Optional[Path] = None

    def env_config(self) -> EnvConfig:
        return self.env if self.env is not None else EnvConfig(universe=load_universe("tradable"))

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "ExperimentConfig":
        _reject_unknown("experiment", values, SECTIONS)
        parsed: Dict[str, Any] = {}
        if "synth" in values:
            parsed["synth"] = SynthConfig.from_dict(values["synth"])
        if "backfill" in values:
            _reject_unknown("backfill", values["backfill"], {"store", "adapter", "s3_bucket", "s3_prefix"})
            parsed["backfill"] = dict(values["backfill"])
        if "extractor" in values:
            parsed["extractor"] = ExtractorConfig.from_dict(values["extractor"])
        if "metrics" in values:
            parsed["metrics"] = MetricsSettings.from_dict(values["metrics"])
        if "gates" in values:
            parsed["gates"] = GateThresholds.from_dict(values["gates"])
        if "optimize" in values:
            parsed["optimize"] = OptimizeSettings.from_dict(values["optimize"])
        if "env" in values:
            env = dict(values["env"])
            env["universe"] = _universe(env.get("universe", "tradable"))
            parsed["env"] = EnvConfig.from_dict(env)
        if "ppo" in values:
            ppo = dict(values["ppo"])
            scale = ppo.pop("scale", "desk")
            if scale not in ("desk", "long"):
                raise ConfigError("ppo.scale must be desk or long")
            parsed["ppo"] = PPOConfig.long_scale(**ppo) if scale == "long" else PPOConfig.from_dict(ppo)
        if "ablation" in values:
            parsed["ablation"] = AblationSpec.from_dict(values["ablation"])
        if "bench" in values:
            parsed["bench"] = BenchSettings.from_dict(values["bench"])
        return cls(**parsed)

    @classmethod
    def load(cls, path: Optional[Union[str, Path]]) -> "ExperimentConfig":
        """
        Read an experiment TOML file; with no path every section takes its defaults.

        :param path: Experiment file.
        :return: Parsed configuration carrying the file's SHA-256.
        """
        if path is None:
            return cls()
        try:
            values = toml.load(path)
        except (OSError, toml.TomlDecodeError) as err:
            raise ConfigError(f"Unable to read experiment config {path}: {err}") from err
        config = cls.from_dict(values)
        config.sha256 = file_sha256(path)
        config.path = Path(path)
        return config
