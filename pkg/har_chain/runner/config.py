"""Run configuration: packaged defaults, config files and flag overrides."""

import copy
import logging
from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from har_chain.ingest.synthetic import SyntheticSpec
from har_chain.model.spec import Architecture
from har_chain.preprocess.config import PipelineConfig
from har_chain.train.config import TrainConfig
from har_chain.validate.protocols import Grouping, Protocol
from har_chain.validate.search import SearchSpace

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).parent / "default_run.yaml"


class ConfigError(ValueError):
    """A configuration file is missing or is not a mapping."""


class DataConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    source: Literal["synthetic", "directory"] = "synthetic"
    directory: str | None = None
    labels: list[str] | None = None
    synthetic: SyntheticSpec = SyntheticSpec()

    @model_validator(mode="after")
    def _directory_given(self) -> "DataConfig":
        if self.source == "directory" and not self.directory:
            raise ValueError("data.directory is required when data.source is 'directory'")
        return self


class ValidationConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    protocol: Protocol = Protocol.HOLDOUT
    k: int = Field(5, ge=2)
    val_fraction: float = Field(0.2, gt=0, lt=1)
    grouping: Grouping = Grouping.SUBJECT


class SearchConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    budget: int = Field(10, ge=1)
    space: SearchSpace


class RunConfig(BaseModel):
    """Fully resolved configuration of one command invocation.

    The master ``seed`` is copied into the model and training seeds so a single
    number governs initialization, shuffling, augmentation, splitting and search.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    seed: int = Field(0, ge=0)
    out: str = "runs/default"
    data: DataConfig = DataConfig()
    pipeline: PipelineConfig = PipelineConfig()
    model: Architecture = Architecture()
    train: TrainConfig = TrainConfig()
    validation: ValidationConfig = ValidationConfig()
    search: SearchConfig | None = None

    @model_validator(mode="before")
    @classmethod
    def _propagate_seed(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = copy.deepcopy(data)
        seed = data.get("seed", 0)
        for section in ("model", "train"):
            part = data.get(section)
            if part is None:
                data[section] = {"seed": seed}
            elif isinstance(part, dict):
                part["seed"] = seed
        return data


def deep_merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    """Recursively merge ``override`` into a copy of ``base``; nested mappings merge, other values replace."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def read_config_file(path: str | Path) -> dict[str, Any]:
    """Parse a YAML or JSON config file; a run manifest is unwrapped to its ``config``.

    :raises ConfigError: If the file does not exist or does not hold a mapping.
    :raises yaml.YAMLError: If the file cannot be parsed.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    with open(path, encoding="utf-8") as f:
        data = yaml.safe_load(f)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at the top level")
    if "config" in data and "command" in data:
        data = data["config"]
    return data


def merge_config(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    """:func:`deep_merge`, except that a given ``search.space`` replaces the base space whole."""
    merged = deep_merge(base, override)
    space = (override.get("search") or {}).get("space")
    if space is not None:
        merged["search"]["space"] = copy.deepcopy(space)
    return merged


def load_run_config(
    path: str | Path | None = None, overrides: dict[str, Any] | None = None
) -> RunConfig:
    """Layer packaged defaults, an optional config file and flag overrides.

    :raises pydantic.ValidationError: If the merged configuration is invalid.
    """
    data = read_config_file(DEFAULT_CONFIG_PATH)
    if path is not None:
        data = merge_config(data, read_config_file(path))
        logger.debug(f"Loaded config file {path}")
    if overrides:
        data = merge_config(data, overrides)
    return RunConfig.model_validate(data)
