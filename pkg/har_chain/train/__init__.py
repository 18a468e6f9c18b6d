"""Training loop, label smoothing and MaxUp."""

from har_chain.train.augment import AugmentKind, augment, make_copies
from har_chain.train.config import EpochRecord, TrainConfig, TrainHistory
from har_chain.train.losses import (
    batch_maxup_loss,
    entropy_floor,
    maxup_loss,
    smooth_label_matrix,
    smooth_labels,
)
from har_chain.train.loop import LossReport, evaluate_loss, train

__all__ = [
    "AugmentKind",
    "EpochRecord",
    "LossReport",
    "TrainConfig",
    "TrainHistory",
    "augment",
    "batch_maxup_loss",
    "entropy_floor",
    "evaluate_loss",
    "make_copies",
    "maxup_loss",
    "smooth_label_matrix",
    "smooth_labels",
    "train",
]
