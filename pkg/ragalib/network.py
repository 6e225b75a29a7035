"""Single-hidden-layer autoregressive feedforward network.

    y_t = out_act( w_out[0] + sum_j w_out[j] * hid_act( w_in[j,0] + sum_i w_in[j,i] * y_{t-i} ) )

w_in is q x (p+1) with the hidden bias in column 0; w_out has the output
bias in element 0. The loss is the mean squared residual over a LagDataset
and gradients are averaged the same way, so a learning rate means the same
thing for 50 rows as for 5000.

The logistic is the increasing 1 / (1 + exp(-x)). A form printed as
1 / (1 + exp(x)) only mirrors the hidden weights and is not used.
"""

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence, Union

import numpy as np
from scipy.special import expit

from ragalib.errors import ConfigError, EmptyDataError, ShapeError
from ragalib.notation import NoteSequence
from ragalib.series import IDENTITY_SCALER, LagDataset, Scaler, embed_lags


class Activation(str, Enum):
    IDENTITY = "identity"
    TANH = "tanh"
    SIGMOID = "sigmoid"

    @classmethod
    def parse(cls, name: Union[str, "Activation"]) -> "Activation":
        try:
            return cls(str(getattr(name, "value", name)).strip().lower())
        except ValueError:
            raise ConfigError(
                f"unknown activation {name!r}; expected one of "
                f"{', '.join(a.value for a in cls)}"
            ) from None


def activate(a: Activation, x):
    if a is Activation.IDENTITY:
        return x
    if a is Activation.TANH:
        return np.tanh(x)
    if a is Activation.SIGMOID:
        return expit(x)
    raise ConfigError(f"unknown activation {a!r}")


def activate_derivative(a: Activation, x):
    if a is Activation.IDENTITY:
        return np.ones_like(x, dtype=float) if np.ndim(x) else 1.0
    if a is Activation.TANH:
        t = np.tanh(x)
        return 1.0 - t * t
    if a is Activation.SIGMOID:
        s = expit(x)
        return s * (1.0 - s)
    raise ConfigError(f"unknown activation {a!r}")


@dataclass(frozen=True)
class NetworkConfig:
    p: int
    q: int
    hidden_act: Activation = Activation.TANH
    output_act: Activation = Activation.IDENTITY

    def __post_init__(self):
        if int(self.p) < 1:
            raise ConfigError(f"p (input lags) must be >= 1, got {self.p}")
        if int(self.q) < 1:
            raise ConfigError(f"q (hidden units) must be >= 1, got {self.q}")
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "q", int(self.q))
        object.__setattr__(self, "hidden_act", Activation.parse(self.hidden_act))
        object.__setattr__(self, "output_act", Activation.parse(self.output_act))

    @property
    def label(self) -> str:
        return f"N^{{{self.p}-{self.q}-1}}"

    @property
    def parameter_count(self) -> int:
        return self.q * (self.p + 1) + (self.q + 1)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "hidden_act": self.hidden_act.value,
            "output_act": self.output_act.value,
        }


@dataclass(frozen=True, eq=False)
class NetworkWeights:
    w_in: np.ndarray  # (q, p+1)
    w_out: np.ndarray  # (q+1,)

    def __post_init__(self):
        w_in = np.array(self.w_in, dtype=float, ndmin=2)
        w_out = np.array(self.w_out, dtype=float).reshape(-1)
        if w_out.shape[0] != w_in.shape[0] + 1:
            raise ShapeError(
                f"w_out has {w_out.shape[0]} entries, expected q+1 = {w_in.shape[0] + 1}"
            )
        w_in.flags.writeable = False
        w_out.flags.writeable = False
        object.__setattr__(self, "w_in", w_in)
        object.__setattr__(self, "w_out", w_out)

    @property
    def p(self) -> int:
        return self.w_in.shape[1] - 1

    @property
    def q(self) -> int:
        return self.w_in.shape[0]

    @property
    def parameter_count(self) -> int:
        return self.w_in.size + self.w_out.size

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.w_in)) and np.all(np.isfinite(self.w_out)))

    def check(self, cfg: NetworkConfig) -> None:
        if self.w_in.shape != (cfg.q, cfg.p + 1):
            raise ShapeError(
                f"w_in shape {self.w_in.shape} does not match {cfg.label} "
                f"(expected {(cfg.q, cfg.p + 1)})"
            )

    def flatten(self) -> np.ndarray:
        """w_in row-major, then w_out."""
        return np.concatenate([self.w_in.ravel(), self.w_out])

    @classmethod
    def from_flat(cls, cfg: NetworkConfig, flat: np.ndarray) -> "NetworkWeights":
        flat = np.asarray(flat, dtype=float)
        if flat.shape != (cfg.parameter_count,):
            raise ShapeError(
                f"expected {cfg.parameter_count} parameters for {cfg.label}, "
                f"got {flat.shape}"
            )
        n_in = cfg.q * (cfg.p + 1)
        return cls(flat[:n_in].reshape(cfg.q, cfg.p + 1), flat[n_in:].copy())

    @classmethod
    def zeros(cls, cfg: NetworkConfig) -> "NetworkWeights":
        return cls(np.zeros((cfg.q, cfg.p + 1)), np.zeros(cfg.q + 1))


class ForwardPass(NamedTuple):
    output: np.ndarray
    hidden_pre: np.ndarray
    hidden_post: np.ndarray
    output_pre: np.ndarray


def forward_batch(w: NetworkWeights, cfg: NetworkConfig, inputs: np.ndarray) -> ForwardPass:
    """Forward pass over a (rows, p) input matrix."""
    w.check(cfg)
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim != 2 or inputs.shape[1] != cfg.p:
        raise ShapeError(f"inputs of shape {inputs.shape} do not match p={cfg.p}")
    hidden_pre = inputs @ w.w_in[:, 1:].T + w.w_in[:, 0]
    hidden_post = activate(cfg.hidden_act, hidden_pre)
    output_pre = w.w_out[0] + hidden_post @ w.w_out[1:]
    return ForwardPass(
        activate(cfg.output_act, output_pre), hidden_pre, hidden_post, output_pre
    )


def forward(w: NetworkWeights, cfg: NetworkConfig, x: Sequence[float]):
    """Single-input forward pass.

    Returns (output, hidden_pre, hidden_post, output_pre) with scalar output
    terms and length-q hidden vectors.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (cfg.p,):
        raise ShapeError(f"input of shape {x.shape} does not match p={cfg.p}")
    fp = forward_batch(w, cfg, x[None, :])
    return ForwardPass(
        float(fp.output[0]), fp.hidden_pre[0], fp.hidden_post[0], float(fp.output_pre[0])
    )


def _check_dataset(cfg: NetworkConfig, ds: LagDataset) -> None:
    if ds.p != cfg.p:
        raise ShapeError(f"dataset lag order {ds.p} does not match {cfg.label}")
    if len(ds) == 0:
        raise EmptyDataError("dataset has no rows")


def mse(w: NetworkWeights, cfg: NetworkConfig, ds: LagDataset) -> float:
    _check_dataset(cfg, ds)
    with np.errstate(over="ignore", invalid="ignore"):
        residuals = ds.targets - forward_batch(w, cfg, ds.inputs).output
        return float(np.mean(residuals * residuals))


def loss_and_gradient(
    w: NetworkWeights, cfg: NetworkConfig, ds: LagDataset
) -> tuple[float, NetworkWeights]:
    """MSE and its exact gradient from a single forward pass."""
    _check_dataset(cfg, ds)
    n = len(ds)
    with np.errstate(over="ignore", invalid="ignore"):
        fp = forward_batch(w, cfg, ds.inputs)
        err = fp.output - ds.targets
        loss = float(np.mean(err * err))

        delta_out = (2.0 / n) * err * activate_derivative(cfg.output_act, fp.output_pre)
        grad_out = np.empty(cfg.q + 1)
        grad_out[0] = delta_out.sum()
        grad_out[1:] = fp.hidden_post.T @ delta_out

        delta_hidden = (
            delta_out[:, None]
            * w.w_out[None, 1:]
            * activate_derivative(cfg.hidden_act, fp.hidden_pre)
        )
        grad_in = np.empty((cfg.q, cfg.p + 1))
        grad_in[:, 0] = delta_hidden.sum(axis=0)
        grad_in[:, 1:] = delta_hidden.T @ ds.inputs
    return loss, NetworkWeights(grad_in, grad_out)


def gradient(w: NetworkWeights, cfg: NetworkConfig, ds: LagDataset) -> NetworkWeights:
    return loss_and_gradient(w, cfg, ds)[1]


@dataclass(frozen=True)
class Prediction:
    t: int
    observed: float
    predicted: float


def predict_series(
    w: NetworkWeights,
    cfg: NetworkConfig,
    seq: Union[NoteSequence, Sequence[float]],
    scaler_in: Scaler = IDENTITY_SCALER,
    scaler_out: Scaler = IDENTITY_SCALER,
) -> list[Prediction]:
    """One-step-ahead predictions for t = p+1..N from observed history."""
    ds = embed_lags(seq, cfg.p)
    with np.errstate(over="ignore", invalid="ignore"):
        out = forward_batch(w, cfg, scaler_in.apply(ds.inputs)).output
        predicted = np.atleast_1d(scaler_out.invert(out))
    return [
        Prediction(int(t), float(obs), float(pred))
        for t, obs, pred in zip(ds.origin_indices, ds.targets, predicted)
    ]


def forecast(
    w: NetworkWeights,
    cfg: NetworkConfig,
    seq: Union[NoteSequence, Sequence[float]],
    steps: int,
    scaler_in: Scaler = IDENTITY_SCALER,
    scaler_out: Scaler = IDENTITY_SCALER,
) -> list[Prediction]:
    """Iterated forecast of the `steps` values after the end of seq.

    Each prediction is fed back as the newest lag. The observed field is NaN.
    """
    history = [float(v) for v in seq]
    if len(history) < cfg.p:
        raise ShapeError(f"need at least p={cfg.p} values to forecast")
    if steps < 1:
        raise ConfigError(f"steps must be >= 1, got {steps}")
    preds = []
    for _ in range(steps):
        lags = history[::-1][: cfg.p]
        out = forward(w, cfg, scaler_in.apply(np.asarray(lags))).output
        value = float(scaler_out.invert(out))
        history.append(value)
        preds.append(Prediction(len(history), float("nan"), value))
    return preds
