"""The altered DeepConvLSTM: construction, forward pass and prediction."""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from har_chain.exceptions import ShapeError
from har_chain.model.spec import ModelSpec
from har_chain.numcore import nn, ops
from har_chain.numcore.serialization import load_parameters, save_parameters
from har_chain.numcore.tensor import Tensor, no_grad, parameter
from har_chain.utils.jsonio import write_json
from har_chain.utils.seeding import derive_rng

logger = logging.getLogger(__name__)

WEIGHTS_FILE = "weights.csv"
SPEC_FILE = "model_spec.json"
FORGET_GATE_BIAS = 1.0


def glorot_uniform(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


@dataclass
class Model:
    """An instantiated network: its spec and ordered parameter tensors."""

    spec: ModelSpec
    params: dict[str, Tensor]

    def parameters(self) -> dict[str, Tensor]:
        return self.params

    def parameter_count(self) -> int:
        return sum(p.size for p in self.params.values())

    def zero_grad(self) -> None:
        for p in self.params.values():
            p.zero_grad()

    def state_dict(self) -> dict[str, np.ndarray]:
        """Copies of all parameter values (a weight snapshot)."""
        return {name: p.values.copy() for name, p in self.params.items()}

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        if list(state) != list(self.params):
            raise ValueError(f"parameter names differ: {list(state)} vs {list(self.params)}")
        for name, values in state.items():
            if values.shape != self.params[name].shape:
                raise ShapeError(f"{name}: shape {values.shape} does not match {self.params[name].shape}")
            self.params[name].values = np.array(values, dtype=np.float64, copy=True)

    def copy(self) -> "Model":
        return Model(spec=self.spec, params={n: parameter(p.values) for n, p in self.params.items()})

    def save(self, directory: str | Path) -> Path:
        """Write ``weights.csv`` and ``model_spec.json`` into ``directory``."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        save_parameters(self.params, directory / WEIGHTS_FILE)
        write_json(directory / SPEC_FILE, self.spec.model_dump(mode="json"))
        return directory

    @classmethod
    def load(cls, directory: str | Path) -> "Model":
        directory = Path(directory)
        spec = ModelSpec.model_validate_json((directory / SPEC_FILE).read_text(encoding="utf-8"))
        model = build_model(spec)
        model.load_state_dict(load_parameters(directory / WEIGHTS_FILE))
        return model


def build_model(spec: ModelSpec) -> Model:
    """Initialize a model deterministically from ``spec.seed``.

    Convolution, LSTM and dense matrices use Glorot-uniform initialization with fans
    computed per matrix; biases are zero except the LSTM forget gate (1.0).
    """
    rng = derive_rng(spec.seed, "init")
    f, kt, h = spec.filters, spec.kernel_length, spec.hidden
    params: dict[str, Tensor] = {}

    f_in = 1
    for layer in range(1, spec.conv_layers + 1):
        shape = (f, f_in, kt, 1)
        params[f"conv{layer}.weight"] = parameter(glorot_uniform(rng, shape, f_in * kt, f * kt))
        params[f"conv{layer}.bias"] = parameter(np.zeros(f))
        f_in = f

    input_size = spec.lstm_input_size
    for layer in range(1, spec.lstm_layers + 1):
        bias = np.zeros(4 * h)
        bias[h : 2 * h] = FORGET_GATE_BIAS
        params[f"lstm{layer}.weight_ih"] = parameter(
            glorot_uniform(rng, (4 * h, input_size), input_size, 4 * h)
        )
        params[f"lstm{layer}.weight_hh"] = parameter(glorot_uniform(rng, (4 * h, h), h, 4 * h))
        params[f"lstm{layer}.bias"] = parameter(bias)
        input_size = h

    k = spec.num_classes
    params["classifier.weight"] = parameter(glorot_uniform(rng, (k, h), h, k))
    params["classifier.bias"] = parameter(np.zeros(k))

    model = Model(spec=spec, params=params)
    logger.debug(f"Built model with {model.parameter_count()} parameters: {spec}")
    return model


def model_forward(model: Model, batch: Tensor | np.ndarray) -> Tensor:
    """Logits ``[B, K]`` for a batch of windows ``[B, W, C]``.

    Convolutions (each followed by a rectifier) run along time per sensor channel;
    feature and channel axes are then flattened per timestep and fed to the LSTM from
    a zero state; the dense head reads the final hidden state.
    """
    spec = model.spec
    x = batch if isinstance(batch, Tensor) else Tensor(batch)
    if x.ndim != 3 or x.shape[1:] != (spec.window_length, spec.input_channels):
        raise ShapeError(
            f"batch shape {x.shape} does not match [B, {spec.window_length}, {spec.input_channels}]"
        )
    size = x.shape[0]
    p = model.params

    x = ops.reshape(x, (size, 1, spec.window_length, spec.input_channels))
    for layer in range(1, spec.conv_layers + 1):
        x = ops.relu(nn.conv_temporal(x, p[f"conv{layer}.weight"], p[f"conv{layer}.bias"]))

    steps = spec.conv_output_length
    x = ops.transpose(x, (0, 2, 1, 3))  # [B, T', F, C]
    x = ops.reshape(x, (size, steps, spec.lstm_input_size))
    sequence = [ops.reshape(ops.slice_axis(x, 1, t, t + 1), (size, spec.lstm_input_size)) for t in range(steps)]

    for layer in range(1, spec.lstm_layers + 1):
        h = Tensor(np.zeros((size, spec.hidden)))
        c = Tensor(np.zeros((size, spec.hidden)))
        outputs = []
        for step_input in sequence:
            h, c = nn.lstm_step(
                step_input,
                h,
                c,
                p[f"lstm{layer}.weight_ih"],
                p[f"lstm{layer}.weight_hh"],
                p[f"lstm{layer}.bias"],
            )
            outputs.append(h)
        sequence = outputs

    return nn.dense(sequence[-1], p["classifier.weight"], p["classifier.bias"])


def predict_logits(model: Model, windows: np.ndarray, batch_size: int = 256) -> np.ndarray:
    """Inference-mode logits for an ``[N, W, C]`` array, evaluated in chunks."""
    windows = np.asarray(windows, dtype=np.float64)
    if windows.shape[0] == 0:
        return np.zeros((0, model.spec.num_classes))
    with no_grad():
        chunks = [
            model_forward(model, windows[i : i + batch_size]).values
            for i in range(0, windows.shape[0], batch_size)
        ]
    return np.concatenate(chunks, axis=0)


def predict_proba(model: Model, windows: np.ndarray, batch_size: int = 256) -> np.ndarray:
    """Class probabilities (softmax of the logits)."""
    logits = predict_logits(model, windows, batch_size)
    return nn.softmax(logits) if logits.size else logits


def predict(model: Model, windows: np.ndarray, batch_size: int = 256) -> np.ndarray:
    """Predicted class ids; ties go to the smaller id."""
    logits = predict_logits(model, windows, batch_size)
    return logits.argmax(axis=1).astype(np.int64)
