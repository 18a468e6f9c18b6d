"""Random-search hyperparameter tuning on a validation split."""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from har_chain.model.spec import Architecture, ModelSpec
from har_chain.preprocess.config import PipelineConfig
from har_chain.preprocess.models import WindowedDataset
from har_chain.train.config import TrainConfig
from har_chain.utils.seeding import derive_rng
from har_chain.validate.crossval import run_fold, spec_for
from har_chain.validate.protocols import Grouping, split_train_val

logger = logging.getLogger(__name__)

TRAIN_PARAMETERS = frozenset(
    {"epochs", "batch_size", "learning_rate", "label_smoothing", "maxup", "jitter_sigma", "scale_sigma"}
)
MODEL_PARAMETERS = frozenset({"conv_layers", "filters", "kernel_length", "hidden", "lstm_layers"})


class ParamRange(BaseModel):
    """Distribution of one hyperparameter."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["log_uniform", "uniform", "choice"]
    low: float | None = None
    high: float | None = None
    values: list[Any] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_bounds(self) -> "ParamRange":
        if self.kind == "choice":
            if not self.values:
                raise ValueError("choice range needs at least one value")
            return self
        if self.low is None or self.high is None:
            raise ValueError(f"{self.kind} range needs low and high")
        if self.low > self.high:
            raise ValueError(f"empty range [{self.low}, {self.high}]")
        if self.kind == "log_uniform" and self.low <= 0:
            raise ValueError(f"log_uniform range needs low > 0, got {self.low}")
        return self

    def sample(self, rng: np.random.Generator) -> Any:
        if self.kind == "choice":
            return self.values[int(rng.integers(len(self.values)))]
        if self.kind == "log_uniform":
            return float(math.exp(rng.uniform(math.log(self.low), math.log(self.high))))
        return float(rng.uniform(self.low, self.high))


class SearchSpace(BaseModel):
    """Named hyperparameter ranges addressing ``TrainConfig`` or ``ModelSpec`` fields.

    Accepts the shorthand ``{"learning_rate": {"log_uniform": [1e-4, 1e-2]},
    "batch_size": {"choice": [32, 64]}}`` as well as explicit ``ParamRange`` mappings.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    params: dict[str, ParamRange]

    @model_validator(mode="before")
    @classmethod
    def _expand_shorthand(cls, data: Any) -> Any:
        if isinstance(data, dict) and "params" not in data:
            data = {"params": data}
        if not isinstance(data, dict) or not isinstance(data.get("params"), dict):
            return data
        params = {}
        for name, spec in data["params"].items():
            if isinstance(spec, dict) and len(spec) == 1 and "kind" not in spec:
                ((kind, bounds),) = spec.items()
                if kind == "choice":
                    spec = {"kind": kind, "values": list(bounds)}
                else:
                    if len(bounds) != 2:
                        raise ValueError(f"{name}: {kind} needs [low, high]")
                    spec = {"kind": kind, "low": bounds[0], "high": bounds[1]}
            params[name] = spec
        return {"params": params}

    @model_validator(mode="after")
    def _known_names(self) -> "SearchSpace":
        if not self.params:
            raise ValueError("search space is empty")
        unknown = set(self.params) - TRAIN_PARAMETERS - MODEL_PARAMETERS
        if unknown:
            raise ValueError(f"unknown hyperparameters: {sorted(unknown)}")
        return self

    def sample(self, rng: np.random.Generator) -> dict[str, Any]:
        """Draw one value per parameter, in sorted name order."""
        drawn = {}
        for name in sorted(self.params):
            value = self.params[name].sample(rng)
            if _is_integer_field(name) and not isinstance(value, bool):
                value = int(round(float(value)))
            drawn[name] = value
        return drawn


def default_search_space() -> SearchSpace:
    return SearchSpace(
        params={
            "learning_rate": {"log_uniform": [1e-4, 1e-2]},
            "label_smoothing": {"uniform": [0.0, 0.2]},
            "batch_size": {"choice": [32, 64, 128]},
        }
    )


def _is_integer_field(name: str) -> bool:
    model = TrainConfig if name in TRAIN_PARAMETERS else ModelSpec
    return model.model_fields[name].annotation is int


def apply_params(
    params: dict[str, Any], train_cfg: TrainConfig, model_spec: ModelSpec
) -> tuple[TrainConfig, ModelSpec]:
    """Return validated copies of both configs with ``params`` substituted."""
    train_update = {k: v for k, v in params.items() if k in TRAIN_PARAMETERS}
    model_update = {k: v for k, v in params.items() if k in MODEL_PARAMETERS}
    return (
        TrainConfig(**{**train_cfg.model_dump(), **train_update}),
        ModelSpec(**{**model_spec.model_dump(), **model_update}),
    )


@dataclass
class TrialRecord:
    trial: int
    params: dict[str, Any]
    val_accuracy: float
    val_macro_f1: float
    best: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "trial": self.trial,
            **self.params,
            "val_accuracy": self.val_accuracy,
            "val_macro_f1": self.val_macro_f1,
            "best": self.best,
        }


@dataclass
class SearchResult:
    best_train_config: TrainConfig
    best_model_spec: ModelSpec
    best_trial: int
    trials: list[TrialRecord] = field(default_factory=list)

    @property
    def best_score(self) -> float:
        return self.trials[self.best_trial].val_macro_f1

    def to_frame(self) -> pd.DataFrame:
        names = sorted({n for t in self.trials for n in t.params})
        columns = ["trial", *names, "val_accuracy", "val_macro_f1", "best"]
        return pd.DataFrame([t.to_dict() for t in self.trials], columns=columns)

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, lineterminator="\n", float_format="%.10g")
        return path


def random_search(
    space: SearchSpace,
    budget: int,
    dataset: WindowedDataset,
    pipeline: PipelineConfig,
    model_spec: Architecture,
    train_cfg: TrainConfig,
    seed: int = 0,
    val_fraction: float = 0.2,
    grouping: Grouping | str = Grouping.SUBJECT,
) -> SearchResult:
    """Evaluate ``budget`` random configurations on one validation split.

    Samples come from the ``search`` stream. Each trial trains from scratch on the
    training side (normalizer fitted there) and is scored by validation macro F1;
    the best trial is the first one reaching the maximum score.

    :raises ValueError: If ``budget`` is below 1.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    rng = derive_rng(seed, "search")
    fold = split_train_val(dataset, val_fraction, seed, grouping)
    base_spec = spec_for(dataset, model_spec)

    trials: list[TrialRecord] = []
    best = 0
    configs = []
    for trial in range(budget):
        params = space.sample(rng)
        cfg, spec = apply_params(params, train_cfg, base_spec)
        logger.info(f"Trial {trial + 1}/{budget}: {params}")
        result, _ = run_fold(dataset, fold, spec, cfg, pipeline)
        trials.append(
            TrialRecord(trial, params, result.metrics.accuracy, result.metrics.macro_f1)
        )
        configs.append((cfg, spec))
        if result.metrics.macro_f1 > trials[best].val_macro_f1:
            best = trial
    trials[best].best = True
    logger.info(f"Best trial {best + 1}: macro_f1={trials[best].val_macro_f1:.4f}")
    return SearchResult(
        best_train_config=configs[best][0],
        best_model_spec=configs[best][1],
        best_trial=best,
        trials=trials,
    )
