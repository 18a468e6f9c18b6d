"""Data models produced by preprocessing: normalization statistics and windows."""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from har_chain.ingest.models import LabelMap


class NormScheme(str, Enum):
    """Per-channel scaling schemes."""

    ZSCORE = "zscore"
    MINMAX = "minmax"


class LabelingRule(str, Enum):
    """How a window's single label is derived from its sample labels."""

    MAJORITY = "majority"
    LAST_SAMPLE = "last_sample"


@dataclass(frozen=True, eq=False)
class NormStats:
    """Per-channel statistics fitted on training data.

    For ``zscore`` only ``mean``/``std`` are meaningful, for ``minmax`` only
    ``minimum``/``maximum``; both pairs are always filled.
    """

    scheme: NormScheme
    channels: tuple[str, ...]
    mean: np.ndarray
    std: np.ndarray
    minimum: np.ndarray
    maximum: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "scheme", NormScheme(self.scheme))
        object.__setattr__(self, "channels", tuple(self.channels))
        for name in ("mean", "std", "minimum", "maximum"):
            value = np.array(getattr(self, name), dtype=np.float64).reshape(-1)
            if value.shape[0] != len(self.channels):
                raise ValueError(f"{name} has {value.shape[0]} entries for {len(self.channels)} channels")
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        if np.any(self.std < 0):
            raise ValueError("standard deviation must be non-negative")
        if np.any(self.maximum < self.minimum):
            raise ValueError("maximum must not be below minimum")

    def to_dict(self) -> dict[str, Any]:
        return {
            "scheme": self.scheme.value,
            "channels": list(self.channels),
            "mean": self.mean.tolist(),
            "std": self.std.tolist(),
            "minimum": self.minimum.tolist(),
            "maximum": self.maximum.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "NormStats":
        return cls(
            scheme=NormScheme(data["scheme"]),
            channels=tuple(data["channels"]),
            mean=data["mean"],
            std=data["std"],
            minimum=data["minimum"],
            maximum=data["maximum"],
        )

    def equals(self, other: "NormStats") -> bool:
        return (
            self.scheme == other.scheme
            and self.channels == other.channels
            and all(
                np.array_equal(getattr(self, n), getattr(other, n))
                for n in ("mean", "std", "minimum", "maximum")
            )
        )


@dataclass(eq=False)
class WindowedDataset:
    """Fixed-length labeled windows with subject provenance.

    Every window is drawn from a single recording. ``starts`` and ``recording_index``
    locate each window in the recordings it was cut from.
    """

    windows: np.ndarray  # (N, W, C)
    labels: np.ndarray  # (N,)
    subject_ids: np.ndarray  # (N,) str
    window_length: int
    stride: int
    rate: float | None
    label_map: LabelMap
    channels: tuple[str, ...] = ()
    starts: np.ndarray = field(default=None)  # (N,)
    recording_index: np.ndarray = field(default=None)  # (N,)

    def __post_init__(self):
        if self.window_length < 1 or self.stride < 1:
            raise ValueError(
                f"window length and stride must be >= 1, got W={self.window_length}, S={self.stride}"
            )
        self.windows = np.asarray(self.windows, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        self.subject_ids = np.asarray(self.subject_ids, dtype=object).reshape(-1)
        n = self.labels.shape[0]
        if self.windows.ndim != 3 or self.windows.shape[0] != n or self.subject_ids.shape[0] != n:
            raise ValueError(
                f"inconsistent dataset: windows {self.windows.shape}, {n} labels, "
                f"{self.subject_ids.shape[0]} subject ids"
            )
        if self.windows.shape[1] != self.window_length:
            raise ValueError(
                f"windows have length {self.windows.shape[1]}, expected {self.window_length}"
            )
        if n and (self.labels.min() < 0 or self.labels.max() >= self.label_map.num_classes):
            raise ValueError("window label outside the label map")
        self.starts = (
            np.zeros(n, dtype=np.int64) if self.starts is None else np.asarray(self.starts, dtype=np.int64)
        )
        self.recording_index = (
            np.zeros(n, dtype=np.int64)
            if self.recording_index is None
            else np.asarray(self.recording_index, dtype=np.int64)
        )
        if not self.channels:
            self.channels = tuple(f"ch_{j}" for j in range(self.windows.shape[2]))
        self.channels = tuple(self.channels)

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def num_channels(self) -> int:
        return int(self.windows.shape[2])

    @property
    def num_classes(self) -> int:
        return self.label_map.num_classes

    def subjects(self) -> list[str]:
        """Distinct subject ids, sorted."""
        return sorted({str(s) for s in self.subject_ids})

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.num_classes)

    def subset(self, indices: np.ndarray | list[int]) -> "WindowedDataset":
        """Dataset restricted to ``indices`` (in the given order)."""
        idx = np.asarray(indices, dtype=np.int64)
        return WindowedDataset(
            windows=self.windows[idx],
            labels=self.labels[idx],
            subject_ids=self.subject_ids[idx],
            window_length=self.window_length,
            stride=self.stride,
            rate=self.rate,
            label_map=self.label_map,
            channels=self.channels,
            starts=self.starts[idx],
            recording_index=self.recording_index[idx],
        )

    def with_windows(self, windows: np.ndarray) -> "WindowedDataset":
        """Same provenance and labels, new window values (e.g. after normalization)."""
        windows = np.asarray(windows, dtype=np.float64)
        if windows.shape != self.windows.shape:
            raise ValueError(f"shape {windows.shape} does not match {self.windows.shape}")
        return WindowedDataset(
            windows=windows,
            labels=self.labels,
            subject_ids=self.subject_ids,
            window_length=self.window_length,
            stride=self.stride,
            rate=self.rate,
            label_map=self.label_map,
            channels=self.channels,
            starts=self.starts,
            recording_index=self.recording_index,
        )

    def to_frame(self) -> pd.DataFrame:
        """Flat debug table ``window_id,subject_id,label,t_index,<channels...>``."""
        n, w, c = self.windows.shape
        frame = pd.DataFrame(self.windows.reshape(n * w, c), columns=list(self.channels))
        frame.insert(0, "t_index", np.tile(np.arange(w), n))
        frame.insert(0, "label", np.repeat([self.label_map.names[k] for k in self.labels], w))
        frame.insert(0, "subject_id", np.repeat(self.subject_ids.astype(str), w))
        frame.insert(0, "window_id", np.repeat(np.arange(n), w))
        return frame

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        self.to_frame().to_csv(path, index=False, lineterminator="\n")
        return path
