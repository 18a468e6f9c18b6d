"""Confusion matrices and classification metrics."""

from har_chain.evaluation.evaluate import Evaluation, evaluate
from har_chain.evaluation.metrics import compute_metrics, confusion_matrix
from har_chain.evaluation.models import ConfusionMatrix, MetricsReport

__all__ = [
    "ConfusionMatrix",
    "Evaluation",
    "MetricsReport",
    "compute_metrics",
    "confusion_matrix",
    "evaluate",
]
