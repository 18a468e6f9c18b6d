"""Confusion matrix and metric report containers."""

from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from har_chain.ingest.models import LabelMap


@dataclass(eq=False)
class ConfusionMatrix:
    """``K x K`` counts; rows are true classes, columns predicted classes."""

    counts: np.ndarray
    label_map: LabelMap | None = None

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 2 or self.counts.shape[0] != self.counts.shape[1]:
            raise ValueError(f"confusion matrix must be square, got shape {self.counts.shape}")
        if np.any(self.counts < 0):
            raise ValueError("confusion matrix entries must be >= 0")
        if self.label_map is not None and self.label_map.num_classes != self.num_classes:
            raise ValueError(
                f"label map has {self.label_map.num_classes} classes, matrix has {self.num_classes}"
            )

    @property
    def num_classes(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def class_names(self) -> list[str]:
        if self.label_map is None:
            return [str(k) for k in range(self.num_classes)]
        return list(self.label_map.names)

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        if other.counts.shape != self.counts.shape:
            raise ValueError(f"cannot add matrices of shape {self.counts.shape} and {other.counts.shape}")
        return ConfusionMatrix(self.counts + other.counts, self.label_map or other.label_map)

    def to_frame(self) -> pd.DataFrame:
        names = self.class_names
        frame = pd.DataFrame(self.counts, index=names, columns=names)
        frame.index.name = "true\\pred"
        return frame

    def write_csv(self, path: str | Path) -> Path:
        """CSV with a header row and a first column of class names."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, lineterminator="\n")
        return path

    def to_dict(self) -> dict[str, Any]:
        return {"class_names": self.class_names, "counts": self.counts.tolist()}


@dataclass
class MetricsReport:
    """Accuracy plus per-class and macro-averaged precision, recall and F1."""

    accuracy: float
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray
    macro_precision: float
    macro_recall: float
    macro_f1: float
    class_names: list[str]

    def to_dict(self) -> dict[str, Any]:
        return {
            "accuracy": self.accuracy,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "per_class": {
                name: {
                    "precision": float(self.precision[k]),
                    "recall": float(self.recall[k]),
                    "f1": float(self.f1[k]),
                    "support": int(self.support[k]),
                }
                for k, name in enumerate(self.class_names)
            },
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MetricsReport":
        names = list(data["per_class"])
        per_class = [data["per_class"][n] for n in names]
        return cls(
            accuracy=data["accuracy"],
            precision=np.array([c["precision"] for c in per_class]),
            recall=np.array([c["recall"] for c in per_class]),
            f1=np.array([c["f1"] for c in per_class]),
            support=np.array([c["support"] for c in per_class], dtype=np.int64),
            macro_precision=data["macro_precision"],
            macro_recall=data["macro_recall"],
            macro_f1=data["macro_f1"],
            class_names=names,
        )
