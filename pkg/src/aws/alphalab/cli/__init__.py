#  Copyright 2024 Amazon.com, Inc. or its affiliates.

# flake8: noqa
from .config import BenchSettings, ExperimentConfig, MetricsSettings, OptimizeSettings
from .manifest import MANIFEST_NAME, RunManifest
