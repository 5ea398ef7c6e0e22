"""Experiment orchestration: configs, seeds, codebook files and Monte Carlo runs."""

from awtc_lab.harness.config import ExperimentConfig, load_config, parse_config_text
from awtc_lab.harness.experiments import (
    E0Result,
    RandomWtcReport,
    ReliabilityResult,
    TrialRecord,
    build_code,
    conflict_count,
    event_e0_check,
    proportion_interval,
    run_random_wtc,
    run_reliability,
)
from awtc_lab.harness.seeds import derive_seed
from awtc_lab.harness.storage import dumps_codebook, load_codebook, loads_codebook, save_codebook

__all__ = [
    "E0Result",
    "ExperimentConfig",
    "RandomWtcReport",
    "ReliabilityResult",
    "TrialRecord",
    "build_code",
    "conflict_count",
    "derive_seed",
    "dumps_codebook",
    "event_e0_check",
    "load_codebook",
    "load_config",
    "loads_codebook",
    "parse_config_text",
    "proportion_interval",
    "run_random_wtc",
    "run_reliability",
    "save_codebook",
]
