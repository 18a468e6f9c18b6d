from dataclasses import dataclass

from har_chain.evaluation.metrics import compute_metrics, confusion_matrix
from har_chain.evaluation.models import ConfusionMatrix, MetricsReport
from har_chain.model.network import Model, predict
from har_chain.preprocess.models import WindowedDataset


@dataclass
class Evaluation:
    confusion: ConfusionMatrix
    metrics: MetricsReport


def evaluate(model: Model, dataset: WindowedDataset, batch_size: int = 256) -> Evaluation:
    """Predict every window of ``dataset`` and score the predictions."""
    if len(dataset) == 0:
        raise ValueError("cannot evaluate on an empty dataset")
    predictions = predict(model, dataset.windows, batch_size)
    cm = confusion_matrix(dataset.labels, predictions, model.spec.num_classes, dataset.label_map)
    return Evaluation(confusion=cm, metrics=compute_metrics(cm))
