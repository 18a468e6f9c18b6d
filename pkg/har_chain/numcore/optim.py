"""Adam optimizer with bias-corrected moment estimates."""

from dataclasses import dataclass, field

import numpy as np

from har_chain.exceptions import ShapeError
from har_chain.numcore.tensor import Tensor


@dataclass
class AdamState:
    """Moment buffers, step counter and hyperparameters of an Adam run."""

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError(f"learning rate must be > 0, got {self.lr}")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValueError(f"betas must lie in [0, 1), got {self.beta1}, {self.beta2}")
        if self.eps <= 0:
            raise ValueError(f"eps must be > 0, got {self.eps}")

    def copy(self) -> "AdamState":
        return AdamState(
            lr=self.lr,
            beta1=self.beta1,
            beta2=self.beta2,
            eps=self.eps,
            t=self.t,
            m={k: v.copy() for k, v in self.m.items()},
            v={k: v.copy() for k, v in self.v.items()},
        )


def adam_update(
    params: dict[str, Tensor], grads: dict[str, np.ndarray], state: AdamState
) -> tuple[dict[str, Tensor], AdamState]:
    """Apply one Adam step in place.

    The step counter is incremented before bias correction; the update is
    ``-lr * m_hat / (sqrt(v_hat) + eps)``.

    :param params: Parameter tensors by name; their values are updated in place.
    :param grads: Gradient per parameter name (a missing entry counts as zero).
    :param state: Optimizer state, updated in place.
    :return: The same ``(params, state)`` objects.
    """
    state.t += 1
    correction1 = 1.0 - state.beta1**state.t
    correction2 = 1.0 - state.beta2**state.t
    for name, param in params.items():
        grad = grads.get(name)
        if grad is None:
            grad = np.zeros_like(param.values)
        if grad.shape != param.shape:
            raise ShapeError(f"adam_update: gradient {grad.shape} does not match {name} {param.shape}")
        if name not in state.m:
            state.m[name] = np.zeros_like(param.values)
            state.v[name] = np.zeros_like(param.values)
        m, v = state.m[name], state.v[name]
        if m.shape != param.shape:
            raise ShapeError(f"adam_update: moment buffer {m.shape} does not match {name} {param.shape}")
        m *= state.beta1
        m += (1.0 - state.beta1) * grad
        v *= state.beta2
        v += (1.0 - state.beta2) * (grad * grad)
        m_hat = m / correction1
        v_hat = v / correction2
        param.values -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return params, state


class Adam:
    """Convenience wrapper binding an :class:`AdamState` to a parameter collection."""

    def __init__(
        self,
        params: dict[str, Tensor],
        lr: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        self.params = params
        self.state = AdamState(lr=lr, beta1=beta1, beta2=beta2, eps=eps)

    def zero_grad(self) -> None:
        for param in self.params.values():
            param.zero_grad()

    def step(self) -> None:
        grads = {name: p.grad for name, p in self.params.items() if p.grad is not None}
        adam_update(self.params, grads, self.state)
