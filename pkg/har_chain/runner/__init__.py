"""Configuration-driven command-line runner."""

from har_chain.runner.artifacts import ArtifactWriter
from har_chain.runner.config import ConfigError, RunConfig, load_run_config

__all__ = ["ArtifactWriter", "ConfigError", "RunConfig", "load_run_config"]
