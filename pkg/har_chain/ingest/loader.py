"""Reading and writing recordings in the canonical per-subject CSV format.

Header: ``subject_id,timestamp,<channel_1>,...,<channel_C>,label``. Timestamps are
decimal seconds, an empty numeric cell marks a missing value and ``label`` holds the
class name.
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from har_chain.exceptions import RecordingFormatError
from har_chain.ingest.models import LabelMap, SensorRecording

logger = logging.getLogger(__name__)

MANDATORY_COLUMNS = ("subject_id", "timestamp", "label")


def _parse_numeric(column: pd.Series, name: str, path: Path) -> np.ndarray:
    stripped = column.str.strip()
    values = pd.to_numeric(stripped, errors="coerce")
    bad = values.isna() & (stripped != "")
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0]) + 1
        raise RecordingFormatError(
            f"non-numeric value {column.iloc[row - 1]!r} in column '{name}' at row {row}",
            path=str(path),
            row=row,
        )
    return values.to_numpy(dtype=np.float64)


def load_recording(path: str | Path, label_map: LabelMap) -> SensorRecording:
    """Load and validate one recording CSV.

    :param path: CSV file following the canonical header.
    :param label_map: Label map the ``label`` column is resolved against.
    :return: A validated :class:`SensorRecording`; empty numeric cells set the missing mask.
    :raises RecordingFormatError: On an empty file, invalid UTF-8, duplicate or missing
        mandatory columns, an unknown label, a non-numeric cell or non-monotonic
        timestamps (with row number).
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"recording not found: {path}")

    try:
        raw = pd.read_csv(path, dtype=str, header=None, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise RecordingFormatError("empty file", path=str(path)) from None
    except UnicodeDecodeError as e:
        raise RecordingFormatError(f"invalid UTF-8 at byte {e.start}", path=str(path)) from None

    header = [str(c).strip() for c in raw.iloc[0]]
    duplicated = sorted({c for c in header if header.count(c) > 1})
    if duplicated:
        raise RecordingFormatError(f"duplicate columns {duplicated}", path=str(path))
    frame = raw.iloc[1:].reset_index(drop=True).fillna("")
    frame.columns = header
    for column in MANDATORY_COLUMNS:
        if column not in frame.columns:
            raise RecordingFormatError(f"missing mandatory column '{column}'", path=str(path))
    if frame.empty:
        raise RecordingFormatError("empty file", path=str(path))

    channels = [c for c in frame.columns if c not in MANDATORY_COLUMNS]
    if not channels:
        raise RecordingFormatError("no channel columns", path=str(path))

    subjects = frame["subject_id"].str.strip().unique()
    if len(subjects) != 1:
        raise RecordingFormatError(
            f"expected one subject per file, found {sorted(subjects)}", path=str(path)
        )

    timestamp_cells = frame["timestamp"].str.strip()
    if (timestamp_cells == "").any():
        row = int(np.flatnonzero((timestamp_cells == "").to_numpy())[0]) + 1
        raise RecordingFormatError(f"empty timestamp at row {row}", path=str(path), row=row)
    timestamps = _parse_numeric(frame["timestamp"], "timestamp", path)

    samples = np.column_stack([_parse_numeric(frame[c], c, path) for c in channels])

    labels = np.empty(len(frame), dtype=np.int64)
    for i, name in enumerate(frame["label"].str.strip()):
        try:
            labels[i] = label_map.id_of(name)
        except KeyError:
            raise RecordingFormatError(
                f"label {name!r} not in label map at row {i + 1}", path=str(path), row=i + 1
            ) from None

    try:
        recording = SensorRecording(
            subject_id=subjects[0],
            timestamps=timestamps,
            channels=tuple(channels),
            samples=samples,
            labels=labels,
        )
    except RecordingFormatError as e:
        raise RecordingFormatError(str(e), path=str(path), row=e.row) from None

    logger.debug(
        f"Loaded {path.name}: subject={recording.subject_id}, T={recording.length}, "
        f"C={recording.num_channels}, missing={int(recording.missing.sum())}"
    )
    return recording


def write_recording(recording: SensorRecording, path: str | Path, label_map: LabelMap) -> Path:
    """Write a recording in the canonical CSV format.

    Floats are written in their shortest round-trip representation, missing values as
    empty cells.

    :return: The written path.
    """
    path = Path(path)
    recording.check_labels(label_map)
    frame = pd.DataFrame(
        np.where(recording.missing, np.nan, recording.samples), columns=list(recording.channels)
    )
    frame.insert(0, "timestamp", recording.timestamps)
    frame.insert(0, "subject_id", recording.subject_id)
    frame["label"] = [label_map.names[i] for i in recording.labels]
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, na_rep="", encoding="utf-8", lineterminator="\n")
    return path


def load_directory(directory: str | Path, label_map: LabelMap) -> list[SensorRecording]:
    """Load every ``*.csv`` recording in a directory, ordered by file name.

    :raises RecordingFormatError: If the directory holds no recordings.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"data directory not found: {directory}")
    files = sorted(directory.glob("*.csv"))
    if not files:
        raise RecordingFormatError("no recordings found", path=str(directory))
    recordings = [load_recording(f, label_map) for f in files]
    logger.info(f"Loaded {len(recordings)} recordings from {directory}")
    return recordings


def write_directory(
    recordings: list[SensorRecording], directory: str | Path, label_map: LabelMap
) -> list[Path]:
    """Write one CSV per recording, named after the subject id."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    return [write_recording(r, directory / f"{r.subject_id}.csv", label_map) for r in recordings]
