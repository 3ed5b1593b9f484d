"""Experiment orchestration, configuration, caching and the command line."""

from .cache import cache_key, cache_lookup, cache_store, cached_sequence
from .config import DEFAULT_SEED, EXPERIMENTS, ExperimentConfig, read_config_file
from .experiments import ExperimentResult, run_experiment

__all__ = [
    "DEFAULT_SEED",
    "EXPERIMENTS",
    "ExperimentConfig",
    "ExperimentResult",
    "cache_key",
    "cache_lookup",
    "cache_store",
    "cached_sequence",
    "read_config_file",
    "run_experiment",
]
