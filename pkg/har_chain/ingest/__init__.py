"""Loading, synthesizing and summarizing raw sensor recordings."""

from har_chain.ingest.loader import (
    load_directory,
    load_recording,
    write_directory,
    write_recording,
)
from har_chain.ingest.models import (
    RWHAR_CLASSES,
    DatasetSummary,
    LabelMap,
    SensorRecording,
)
from har_chain.ingest.summary import estimate_rate, run_lengths, summarize
from har_chain.ingest.synthetic import SyntheticSpec, generate_synthetic, synthetic_label_map

__all__ = [
    "RWHAR_CLASSES",
    "DatasetSummary",
    "LabelMap",
    "SensorRecording",
    "SyntheticSpec",
    "estimate_rate",
    "generate_synthetic",
    "load_directory",
    "load_recording",
    "run_lengths",
    "summarize",
    "synthetic_label_map",
    "write_directory",
    "write_recording",
]
