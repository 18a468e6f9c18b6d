"""Data models for raw sensor recordings and dataset summaries."""

from dataclasses import dataclass, field
from typing import Any

import numpy as np
import pandas as pd

from har_chain.exceptions import RecordingFormatError

# Class list of the RealWorld HAR corpus, in the order the tutorial introduces it.
RWHAR_CLASSES = (
    "walking_upstairs",
    "walking_downstairs",
    "jumping",
    "lying",
    "standing",
    "sitting",
    "running",
    "walking",
)


@dataclass(frozen=True)
class LabelMap:
    """Bijection between class names and contiguous integer ids ``0..K-1``."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        if len(names) < 2:
            raise ValueError(f"a label map needs at least 2 classes, got {len(names)}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate class names in label map: {names}")
        object.__setattr__(self, "names", names)

    @classmethod
    def from_names(cls, names: list[str] | tuple[str, ...]) -> "LabelMap":
        """Create a label map from an ordered list of class names."""
        return cls(tuple(names))

    @classmethod
    def rwhar(cls) -> "LabelMap":
        """The canonical 8-class RealWorld HAR label map."""
        return cls(RWHAR_CLASSES)

    @classmethod
    def generic(cls, classes: int) -> "LabelMap":
        """Label map ``class_0 .. class_{K-1}``; the RWHAR map when ``classes == 8``."""
        if classes == len(RWHAR_CLASSES):
            return cls.rwhar()
        return cls(tuple(f"class_{k}" for k in range(classes)))

    @property
    def num_classes(self) -> int:
        return len(self.names)

    def id_of(self, name: str) -> int:
        """Return the id of a class name.

        :raises KeyError: If the name is not part of the map.
        """
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(name) from None

    def name_of(self, class_id: int) -> str:
        """Return the name of a class id."""
        if not 0 <= class_id < len(self.names):
            raise KeyError(class_id)
        return self.names[class_id]

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def __len__(self) -> int:
        return len(self.names)

    def to_dict(self) -> dict[str, Any]:
        return {"names": list(self.names)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "LabelMap":
        return cls(tuple(data["names"]))


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SensorRecording:
    """One subject's multichannel timestamped inertial stream with per-sample labels.

    ``samples`` holds ``NaN`` wherever ``missing`` is true. Arrays are copied on
    construction and made read-only, so a recording can be shared freely.
    """

    subject_id: str
    timestamps: np.ndarray  # (T,) seconds
    channels: tuple[str, ...]
    samples: np.ndarray  # (T, C)
    labels: np.ndarray  # (T,) class ids
    missing: np.ndarray = field(default=None)  # (T, C) True = absent

    def __post_init__(self):
        timestamps = np.array(self.timestamps, dtype=np.float64).reshape(-1)
        samples = np.array(self.samples, dtype=np.float64)
        labels = np.array(self.labels, dtype=np.int64).reshape(-1)
        channels = tuple(str(c) for c in self.channels)

        if samples.ndim == 1:
            samples = samples.reshape(-1, 1)
        if self.missing is None:
            missing = np.isnan(samples)
        else:
            missing = np.array(self.missing, dtype=bool)
            if missing.shape != samples.shape:
                raise RecordingFormatError(
                    f"missing mask shape {missing.shape} does not match samples {samples.shape}"
                )
            missing = missing | np.isnan(samples)
        samples = np.where(missing, np.nan, samples)

        if not channels:
            raise RecordingFormatError("a recording needs at least one channel")
        if len(set(channels)) != len(channels):
            raise RecordingFormatError(f"duplicate channel names: {channels}")
        if samples.shape[1] != len(channels):
            raise RecordingFormatError(
                f"samples have {samples.shape[1]} columns but {len(channels)} channels are named"
            )
        if not (len(timestamps) == samples.shape[0] == len(labels)):
            raise RecordingFormatError(
                f"length mismatch: {len(timestamps)} timestamps, {samples.shape[0]} sample rows, "
                f"{len(labels)} labels"
            )
        if not np.all(np.isfinite(timestamps)):
            bad = int(np.flatnonzero(~np.isfinite(timestamps))[0])
            raise RecordingFormatError("timestamp is not a finite number", row=bad + 1)
        steps = np.diff(timestamps)
        if np.any(steps <= 0):
            bad = int(np.flatnonzero(steps <= 0)[0]) + 1
            raise RecordingFormatError(f"non-monotonic at row {bad + 1}", row=bad + 1)
        if len(labels) and labels.min() < 0:
            bad = int(np.flatnonzero(labels < 0)[0])
            raise RecordingFormatError(f"negative label id at row {bad + 1}", row=bad + 1)

        object.__setattr__(self, "subject_id", str(self.subject_id))
        object.__setattr__(self, "timestamps", _readonly(timestamps))
        object.__setattr__(self, "channels", channels)
        object.__setattr__(self, "samples", _readonly(samples))
        object.__setattr__(self, "labels", _readonly(labels))
        object.__setattr__(self, "missing", _readonly(missing))

    @property
    def length(self) -> int:
        return int(self.timestamps.shape[0])

    @property
    def num_channels(self) -> int:
        return len(self.channels)

    @property
    def has_missing(self) -> bool:
        return bool(self.missing.any())

    def check_labels(self, label_map: LabelMap) -> None:
        """Ensure every label id belongs to ``label_map``."""
        out_of_range = np.flatnonzero(self.labels >= label_map.num_classes)
        if out_of_range.size:
            row = int(out_of_range[0]) + 1
            raise RecordingFormatError(
                f"label id {int(self.labels[row - 1])} not in label map at row {row}", row=row
            )

    def replace(self, **changes: Any) -> "SensorRecording":
        """Return a copy with some fields replaced (validated again)."""
        fields = {
            "subject_id": self.subject_id,
            "timestamps": self.timestamps,
            "channels": self.channels,
            "samples": self.samples,
            "labels": self.labels,
            "missing": self.missing,
        }
        fields.update(changes)
        if "samples" in changes and "missing" not in changes:
            fields["missing"] = None
        return SensorRecording(**fields)

    def equals(self, other: "SensorRecording") -> bool:
        """Bitwise equality of all fields (``NaN`` positions compare equal)."""
        return (
            self.subject_id == other.subject_id
            and self.channels == other.channels
            and np.array_equal(self.timestamps, other.timestamps)
            and np.array_equal(self.samples, other.samples, equal_nan=True)
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.missing, other.missing)
        )


@dataclass
class DatasetSummary:
    """Label distribution, bout statistics and per-channel statistics of a dataset."""

    class_counts: dict[str, int]
    bout_counts: dict[str, int]
    mean_bout_seconds: dict[str, float]
    channel_stats: dict[str, dict[str, float | None]]
    sampling_rate_hz: float | None
    missing_count: int
    total_samples: int
    num_recordings: int
    subject_samples: dict[str, int] = field(default_factory=dict)
    mean_recording_seconds: float | None = None

    @property
    def num_classes(self) -> int:
        return len(self.class_counts)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary representation.

        :return: A JSON-serializable dictionary mirroring the summary fields.
        """
        return {
            "class_counts": dict(self.class_counts),
            "bout_counts": dict(self.bout_counts),
            "mean_bout_seconds": dict(self.mean_bout_seconds),
            "channel_stats": {k: dict(v) for k, v in self.channel_stats.items()},
            "sampling_rate_hz": self.sampling_rate_hz,
            "missing_count": self.missing_count,
            "total_samples": self.total_samples,
            "num_recordings": self.num_recordings,
            "subject_samples": dict(self.subject_samples),
            "mean_recording_seconds": self.mean_recording_seconds,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DatasetSummary":
        """Create from dictionary representation."""
        return cls(
            class_counts=data["class_counts"],
            bout_counts=data["bout_counts"],
            mean_bout_seconds=data["mean_bout_seconds"],
            channel_stats=data["channel_stats"],
            sampling_rate_hz=data.get("sampling_rate_hz"),
            missing_count=data.get("missing_count", 0),
            total_samples=data.get("total_samples", sum(data["class_counts"].values())),
            num_recordings=data.get("num_recordings", 0),
            subject_samples=data.get("subject_samples", {}),
            mean_recording_seconds=data.get("mean_recording_seconds"),
        )

    def class_distribution_frame(self) -> pd.DataFrame:
        """Per-class distribution table suitable for plotting."""
        total = self.total_samples or 1
        rows = [
            {
                "class": name,
                "samples": count,
                "fraction": count / total,
                "bouts": self.bout_counts.get(name, 0),
                "mean_bout_seconds": self.mean_bout_seconds.get(name),
            }
            for name, count in self.class_counts.items()
        ]
        return pd.DataFrame(
            rows, columns=["class", "samples", "fraction", "bouts", "mean_bout_seconds"]
        )
