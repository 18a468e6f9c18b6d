"""DeepConvLSTM classifier built on the numcore engine."""

from har_chain.model.network import (
    Model,
    build_model,
    model_forward,
    predict,
    predict_logits,
    predict_proba,
)
from har_chain.model.spec import Architecture, ModelSpec, expected_parameter_count

__all__ = [
    "Architecture",
    "Model",
    "ModelSpec",
    "build_model",
    "expected_parameter_count",
    "model_forward",
    "predict",
    "predict_logits",
    "predict_proba",
]
