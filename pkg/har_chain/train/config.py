"""Training configuration and per-epoch history."""

import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

HISTORY_COLUMNS = ["epoch", "train_loss", "train_acc", "val_loss", "val_acc", "val_macro_f1"]


class TrainConfig(BaseModel):
    """Optimizer, batching and regularization settings for one training run.

    ``maxup`` is the number of augmented copies per window (0 disables MaxUp);
    ``label_smoothing`` must stay below 1.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    epochs: int = Field(30, ge=1)
    batch_size: int = Field(64, ge=1)
    learning_rate: float = Field(1e-3, gt=0)
    beta1: float = Field(0.9, ge=0, lt=1)
    beta2: float = Field(0.999, ge=0, lt=1)
    eps: float = Field(1e-8, gt=0)
    label_smoothing: float = Field(0.0, ge=0, lt=1)
    maxup: int = Field(0, ge=0)
    jitter_sigma: float = Field(0.05, ge=0)
    scale_sigma: float = Field(0.1, ge=0)
    seed: int = Field(0, ge=0)


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    train_acc: float
    val_loss: float | None = None
    val_acc: float | None = None
    val_macro_f1: float | None = None


@dataclass
class TrainHistory:
    """One record per completed epoch."""

    records: list[EpochRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def append(self, record: EpochRecord) -> None:
        if not math.isfinite(record.train_loss):
            raise ValueError(f"epoch {record.epoch}: training loss {record.train_loss} is not finite")
        self.records.append(record)

    @property
    def final(self) -> EpochRecord:
        if not self.records:
            raise IndexError("history is empty")
        return self.records[-1]

    def to_dict(self) -> dict[str, Any]:
        return {"records": [asdict(r) for r in self.records]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TrainHistory":
        return cls(records=[EpochRecord(**r) for r in data.get("records", [])])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(r) for r in self.records], columns=HISTORY_COLUMNS)

    def write_csv(self, path: str | Path) -> Path:
        """Write ``epoch,train_loss,...``; absent validation values are empty cells."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, na_rep="", lineterminator="\n", float_format="%.10g")
        return path
