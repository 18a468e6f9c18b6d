"""Network primitives: temporal convolution, LSTM cell, dense layer and losses."""

import numpy as np

from har_chain.exceptions import ShapeError
from har_chain.numcore import ops
from har_chain.numcore.tensor import Tensor

# tolerance on target rows summing to one
STOCHASTIC_TOLERANCE = 1e-9


def conv_temporal(inputs: Tensor, kernels: Tensor, bias: Tensor) -> Tensor:
    """Valid, stride-1 convolution along the time axis, applied per sensor channel.

    Cross-correlation convention (no kernel flip)::

        out[b, f, t, c] = bias[f] + sum_{g, k} inputs[b, g, t + k, c] * kernels[f, g, k, 0]

    :param inputs: ``[B, F_in, T, C]``.
    :param kernels: ``[F_out, F_in, K, 1]``.
    :param bias: ``[F_out]``.
    :return: ``[B, F_out, T - K + 1, C]``.
    """
    if inputs.ndim != 4 or kernels.ndim != 4 or bias.ndim != 1:
        raise ShapeError(
            f"conv_temporal: expected 4-D input/kernels and 1-D bias, got "
            f"{inputs.shape}, {kernels.shape}, {bias.shape}"
        )
    batch, f_in, length, channels = inputs.shape
    f_out, k_in, width, one = kernels.shape
    if k_in != f_in or one != 1 or bias.shape[0] != f_out:
        raise ShapeError(
            f"conv_temporal: kernels {kernels.shape} / bias {bias.shape} do not fit input {inputs.shape}"
        )
    if length < width:
        raise ShapeError(f"conv_temporal: input length {length} shorter than kernel {width}")

    out_length = length - width + 1
    weight = kernels.values[..., 0]  # [F_out, F_in, K]
    # [B, F_in, T', C, K]
    patches = np.lib.stride_tricks.sliding_window_view(inputs.values, width, axis=2)
    rows = np.transpose(patches, (0, 2, 3, 1, 4)).reshape(-1, f_in * width)
    out_values = ops.rowwise_matmul(rows, weight.reshape(f_out, f_in * width).T)
    out_values = out_values.reshape(batch, out_length, channels, f_out)
    out_values = np.ascontiguousarray(np.transpose(out_values, (0, 3, 1, 2)))
    out_values += bias.values[None, :, None, None]

    def backward(g: np.ndarray) -> None:
        if kernels.requires_grad:
            grad_w = np.tensordot(g, patches, axes=([0, 2, 3], [0, 2, 3]))  # [F_out, F_in, K]
            kernels.accumulate(grad_w[..., None])
        if bias.requires_grad:
            bias.accumulate(g.sum(axis=(0, 2, 3)))
        if inputs.requires_grad:
            spread = np.tensordot(g, weight, axes=([1], [0]))  # [B, T', C, F_in, K]
            grad_x = np.zeros_like(inputs.values)
            for k in range(width):
                grad_x[:, :, k : k + out_length, :] += np.transpose(spread[..., k], (0, 3, 1, 2))
            inputs.accumulate(grad_x)

    return Tensor.from_op(out_values, (inputs, kernels, bias), backward, "conv_temporal")


def dense(inputs: Tensor, weight: Tensor, bias: Tensor) -> Tensor:
    """Affine map ``inputs @ weight.T + bias``.

    :param inputs: ``[B, D]``.
    :param weight: ``[K, D]``.
    :param bias: ``[K]``.
    :return: ``[B, K]``.
    """
    if inputs.ndim != 2 or weight.ndim != 2 or bias.ndim != 1:
        raise ShapeError(
            f"dense: expected 2-D input/weight and 1-D bias, got {inputs.shape}, {weight.shape}, {bias.shape}"
        )
    if inputs.shape[1] != weight.shape[1] or weight.shape[0] != bias.shape[0]:
        raise ShapeError(f"dense: shapes {inputs.shape}, {weight.shape}, {bias.shape} do not fit")

    def backward(g: np.ndarray) -> None:
        inputs.accumulate(g @ weight.values)
        weight.accumulate(g.T @ inputs.values)
        bias.accumulate(g.sum(axis=0))

    out_values = ops.rowwise_matmul(inputs.values, weight.values.T) + bias.values[None, :]
    return Tensor.from_op(out_values, (inputs, weight, bias), backward, "dense")


def lstm_step(
    x: Tensor, h: Tensor, c: Tensor, weight_ih: Tensor, weight_hh: Tensor, bias: Tensor
) -> tuple[Tensor, Tensor]:
    """One LSTM time step.

    Gate order along the ``4H`` axis is (input, forget, candidate, output)::

        i, f, o = logistic(.)   g = tanh(.)
        c' = f * c + i * g      h' = o * tanh(c')

    :param x: ``[B, D]``.
    :param h: ``[B, H]``.
    :param c: ``[B, H]``.
    :param weight_ih: ``[4H, D]``.
    :param weight_hh: ``[4H, H]``.
    :param bias: ``[4H]``.
    :return: ``(h', c')``.
    """
    hidden = h.shape[1] if h.ndim == 2 else -1
    if (
        x.ndim != 2
        or h.shape != c.shape
        or h.shape[0] != x.shape[0]
        or weight_ih.shape != (4 * hidden, x.shape[1])
        or weight_hh.shape != (4 * hidden, hidden)
        or bias.shape != (4 * hidden,)
    ):
        raise ShapeError(
            f"lstm_step: inconsistent shapes x={x.shape}, h={h.shape}, c={c.shape}, "
            f"W_ih={weight_ih.shape}, W_hh={weight_hh.shape}, b={bias.shape}"
        )
    pre = ops.add(dense(x, weight_ih, bias), ops.matmul_t(h, weight_hh))
    i = ops.sigmoid(ops.slice_axis(pre, 1, 0, hidden))
    f = ops.sigmoid(ops.slice_axis(pre, 1, hidden, 2 * hidden))
    g = ops.tanh(ops.slice_axis(pre, 1, 2 * hidden, 3 * hidden))
    o = ops.sigmoid(ops.slice_axis(pre, 1, 3 * hidden, 4 * hidden))
    c_next = ops.add(ops.mul(f, c), ops.mul(i, g))
    h_next = ops.mul(o, ops.tanh(c_next))
    return h_next, c_next


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax of a ``[B, K]`` array (stabilized)."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise log-softmax via the log-sum-exp form."""
    top = logits.max(axis=1, keepdims=True)
    shifted = logits - top
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def _check_target(logits: Tensor, target: np.ndarray) -> np.ndarray:
    target = np.asarray(target.values if isinstance(target, Tensor) else target, dtype=np.float64)
    if logits.ndim != 2 or target.shape != logits.shape:
        raise ShapeError(f"cross entropy: logits {logits.shape} and target {target.shape} differ")
    sums = target.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > STOCHASTIC_TOLERANCE) or np.any(target < 0):
        bad = int(np.flatnonzero((np.abs(sums - 1.0) > STOCHASTIC_TOLERANCE) | (target < 0).any(axis=1))[0])
        raise ValueError(f"target row {bad} is not a probability distribution (sum={sums[bad]})")
    return target


def cross_entropy_rows(logits: Tensor, target) -> Tensor:
    """Per-row loss ``-sum_k target * log softmax(logits)`` as a ``[B]`` tensor.

    :param logits: ``[B, K]``.
    :param target: ``[B, K]`` row-stochastic array or tensor (treated as constant).
    """
    target = _check_target(logits, target)
    log_p = log_softmax(logits.values)
    losses = -(target * log_p).sum(axis=1)

    def backward(g: np.ndarray) -> None:
        logits.accumulate(g[:, None] * (np.exp(log_p) - target))

    return Tensor.from_op(losses, (logits,), backward, "cross_entropy")


def softmax_cross_entropy(logits: Tensor, target) -> Tensor:
    """Batch-mean cross entropy; gradient w.r.t. logits is ``(softmax - target) / B``."""
    return ops.mean_all(cross_entropy_rows(logits, target))
