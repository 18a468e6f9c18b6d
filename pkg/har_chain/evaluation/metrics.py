"""Classification metrics from a confusion matrix."""

import numpy as np

from har_chain.evaluation.models import ConfusionMatrix, MetricsReport
from har_chain.ingest.models import LabelMap


def confusion_matrix(
    truth: np.ndarray, pred: np.ndarray, num_classes: int, label_map: LabelMap | None = None
) -> ConfusionMatrix:
    """Tally ``(truth, pred)`` pairs into a ``K x K`` matrix.

    :raises ValueError: On length mismatch or ids outside ``[0, K)``.
    """
    truth = np.asarray(truth, dtype=np.int64).reshape(-1)
    pred = np.asarray(pred, dtype=np.int64).reshape(-1)
    if truth.shape != pred.shape:
        raise ValueError(f"truth has {truth.size} entries, predictions {pred.size}")
    for name, ids in (("truth", truth), ("pred", pred)):
        if ids.size and (ids.min() < 0 or ids.max() >= num_classes):
            raise ValueError(f"{name} contains a class id outside [0, {num_classes})")
    counts = np.zeros((num_classes, num_classes), dtype=np.int64)
    np.add.at(counts, (truth, pred), 1)
    return ConfusionMatrix(counts, label_map)


def _safe_ratio(numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    # 0/0 -> 0
    out = np.zeros_like(numerator, dtype=np.float64)
    np.divide(numerator, denominator, out=out, where=denominator > 0)
    return out


def compute_metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Per-class and macro scores.

    Macro averages run over classes present in the truth (row sum > 0) only.

    :raises ValueError: If the matrix is empty.
    """
    if cm.total == 0:
        raise ValueError("cannot compute metrics on an empty confusion matrix")
    counts = cm.counts.astype(np.float64)
    tp = np.diag(counts)
    support = cm.counts.sum(axis=1)
    precision = _safe_ratio(tp, counts.sum(axis=0))
    recall = _safe_ratio(tp, counts.sum(axis=1))
    f1 = _safe_ratio(2.0 * precision * recall, precision + recall)
    present = support > 0
    return MetricsReport(
        accuracy=float(tp.sum() / counts.sum()),
        precision=precision,
        recall=recall,
        f1=f1,
        support=support,
        macro_precision=float(precision[present].mean()),
        macro_recall=float(recall[present].mean()),
        macro_f1=float(f1[present].mean()),
        class_names=cm.class_names,
    )
