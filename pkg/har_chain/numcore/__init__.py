"""Minimal reverse-mode automatic differentiation engine and Adam optimizer."""

from har_chain.numcore.gradcheck import check_gradients, numeric_gradient, relative_error
from har_chain.numcore.nn import (
    conv_temporal,
    cross_entropy_rows,
    dense,
    log_softmax,
    lstm_step,
    softmax,
    softmax_cross_entropy,
)
from har_chain.numcore.ops import (
    add,
    concat,
    gather,
    matmul_t,
    mean_all,
    mul,
    relu,
    reshape,
    scale,
    sigmoid,
    slice_axis,
    sub,
    sum_all,
    tanh,
    transpose,
)
from har_chain.numcore.optim import Adam, AdamState, adam_update
from har_chain.numcore.serialization import load_parameters, save_parameters
from har_chain.numcore.tensor import Tensor, is_grad_enabled, no_grad, parameter

__all__ = [
    "Adam",
    "AdamState",
    "Tensor",
    "adam_update",
    "add",
    "check_gradients",
    "concat",
    "conv_temporal",
    "cross_entropy_rows",
    "dense",
    "gather",
    "is_grad_enabled",
    "load_parameters",
    "log_softmax",
    "lstm_step",
    "matmul_t",
    "mean_all",
    "mul",
    "no_grad",
    "numeric_gradient",
    "parameter",
    "relative_error",
    "relu",
    "reshape",
    "save_parameters",
    "scale",
    "sigmoid",
    "slice_axis",
    "softmax",
    "softmax_cross_entropy",
    "sub",
    "sum_all",
    "tanh",
    "transpose",
]
