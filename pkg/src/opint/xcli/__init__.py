"""Batch experiment runner."""

from .config import ExperimentConfig, load_config, parse_config
from .suites import SUITES, SuiteReport, holder_experiment, run_suite, singular_decay_experiment
