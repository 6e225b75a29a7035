"""Full-batch gradient descent with momentum, seeded restarts and early stop.

Per epoch, with g the gradient of the mean squared error over the whole
dataset:

    v(t+1) = -eta * g + delta * v(t),    w <- w + v(t+1),    v(0) = 0

delta = 0 is plain gradient descent. Each restart k starts from weights drawn
with seed (seed + k); the restart with the lowest final MSE wins, ties going
to the lower k, so running restarts on a thread pool never changes the
result.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np
import pandas as pd

from ragalib.errors import ConfigError, DivergenceError, EmptyDataError, ShapeError
from ragalib.network import NetworkConfig, NetworkWeights, loss_and_gradient
from ragalib.series import LagDataset
from ragalib.util import SEED_MASK, SharedProgress, check_seed, make_rng

INIT_LOW = -0.5
INIT_HIGH = 0.5


@dataclass(frozen=True)
class TrainConfig:
    eta: float = 0.05
    delta: float = 0.9
    max_epochs: int = 5000
    patience: int = 200
    min_improvement: float = 1e-8
    seed: int = 0
    restarts: int = 10

    def __post_init__(self):
        if not self.eta > 0:
            raise ConfigError(f"eta must be > 0, got {self.eta}")
        if not 0.0 <= self.delta <= 1.0:
            raise ConfigError(f"delta must lie in [0, 1], got {self.delta}")
        if self.max_epochs < 1:
            raise ConfigError(f"max_epochs must be >= 1, got {self.max_epochs}")
        if self.patience < 1:
            raise ConfigError(f"patience must be >= 1, got {self.patience}")
        if self.min_improvement < 0:
            raise ConfigError(
                f"min_improvement must be >= 0, got {self.min_improvement}"
            )
        if self.restarts < 1:
            raise ConfigError(f"restarts must be >= 1, got {self.restarts}")
        object.__setattr__(self, "seed", check_seed(self.seed))

    def with_seed(self, seed: int) -> "TrainConfig":
        return replace(self, seed=seed)


def init_weights(cfg: NetworkConfig, seed: int) -> NetworkWeights:
    """Independent uniform draws on [-0.5, 0.5), w_in row-major then w_out."""
    rng = make_rng(seed)
    return NetworkWeights.from_flat(
        cfg, rng.uniform(INIT_LOW, INIT_HIGH, size=cfg.parameter_count)
    )


@dataclass
class TrainTrace:
    """Per-epoch record of one restart: weights before the update, the
    gradient there, and the velocity applied."""

    weights: list[np.ndarray] = field(default_factory=list)
    gradients: list[np.ndarray] = field(default_factory=list)
    velocities: list[np.ndarray] = field(default_factory=list)

    def record(self, flat: np.ndarray, grad: np.ndarray, velocity: np.ndarray) -> None:
        self.weights.append(flat.copy())
        self.gradients.append(grad.copy())
        self.velocities.append(velocity.copy())


@dataclass(frozen=True)
class RestartResult:
    index: int
    seed: int
    final_mse: float
    epochs_run: int
    failed: bool = False
    error: str = ""


@dataclass(frozen=True, eq=False)
class TrainReport:
    final_weights: NetworkWeights
    epochs_run: int
    # Ends at the retained (lowest-MSE) epoch; entry 0 is the initial MSE.
    loss_history: tuple[float, ...]
    best_restart_seed: int
    best_epoch: int = 0
    restarts: tuple[RestartResult, ...] = ()

    @property
    def final_mse(self) -> float:
        return self.loss_history[-1]


@dataclass(frozen=True, eq=False)
class _RestartRun:
    weights: NetworkWeights
    history: tuple[float, ...]
    epochs_run: int
    best_epoch: int


def _run_restart(
    net_cfg: NetworkConfig,
    train_cfg: TrainConfig,
    ds: LagDataset,
    seed: int,
    trace: Optional[TrainTrace] = None,
) -> _RestartRun:
    eta, delta = train_cfg.eta, train_cfg.delta
    flat = init_weights(net_cfg, seed).flatten()
    loss, grad = loss_and_gradient(NetworkWeights.from_flat(net_cfg, flat), net_cfg, ds)
    if not math.isfinite(loss):
        raise DivergenceError(0, eta, seed)

    history = [loss]
    best_loss, best_flat, best_epoch = loss, flat, 0
    reference, stall = loss, 0
    velocity = np.zeros_like(flat)
    epochs_run = 0

    for epoch in range(1, train_cfg.max_epochs + 1):
        g = grad.flatten()
        velocity = -eta * g + delta * velocity
        if trace is not None:
            trace.record(flat, g, velocity)
        flat = flat + velocity
        loss, grad = loss_and_gradient(
            NetworkWeights.from_flat(net_cfg, flat), net_cfg, ds
        )
        epochs_run = epoch
        if not math.isfinite(loss):
            raise DivergenceError(epoch, eta, seed)
        history.append(loss)

        if loss < best_loss:
            best_loss, best_flat, best_epoch = loss, flat, epoch
        if loss < reference - train_cfg.min_improvement:
            reference, stall = loss, 0
        else:
            stall += 1
            if stall >= train_cfg.patience:
                break

    return _RestartRun(
        weights=NetworkWeights.from_flat(net_cfg, best_flat),
        history=tuple(history[: best_epoch + 1]),
        epochs_run=epochs_run,
        best_epoch=best_epoch,
    )


def train(
    net_cfg: NetworkConfig,
    train_cfg: TrainConfig,
    ds: LagDataset,
    jobs: int = 1,
    progress: Optional[SharedProgress] = None,
    trace: Optional[TrainTrace] = None,
) -> TrainReport:
    """Train `train_cfg.restarts` seeded initialisations and keep the best.

    A restart whose loss turns non-finite is recorded as failed; if every
    restart fails the first DivergenceError is raised. `trace`, when given,
    records restart 0.
    """
    if ds.p != net_cfg.p:
        raise ShapeError(f"dataset lag order {ds.p} does not match {net_cfg.label}")
    if len(ds) == 0:
        raise EmptyDataError("cannot train on an empty dataset")

    seeds = [(train_cfg.seed + k) & SEED_MASK for k in range(train_cfg.restarts)]

    def worker(k: int) -> Union[_RestartRun, DivergenceError]:
        try:
            return _run_restart(
                net_cfg, train_cfg, ds, seeds[k], trace if k == 0 else None
            )
        except DivergenceError as e:
            return e
        finally:
            if progress is not None:
                progress.update()

    if jobs > 1 and len(seeds) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            outcomes = list(executor.map(worker, range(len(seeds))))
    else:
        outcomes = [worker(k) for k in range(len(seeds))]

    summaries = []
    best_k = None
    for k, outcome in enumerate(outcomes):
        if isinstance(outcome, DivergenceError):
            summaries.append(
                RestartResult(k, seeds[k], float("nan"), outcome.epoch, True, str(outcome))
            )
            continue
        final = outcome.history[-1]
        summaries.append(RestartResult(k, seeds[k], final, outcome.epochs_run))
        # Strict < keeps the lower index on ties.
        if best_k is None or final < outcomes[best_k].history[-1]:
            best_k = k

    if best_k is None:
        raise outcomes[0]

    best = outcomes[best_k]
    return TrainReport(
        final_weights=best.weights,
        epochs_run=best.epochs_run,
        loss_history=best.history,
        best_restart_seed=seeds[best_k],
        best_epoch=best.best_epoch,
        restarts=tuple(summaries),
    )


def write_loss_csv(report: TrainReport, path) -> None:
    """Per-epoch MSE of the winning restart as `epoch,mse`."""
    df = pd.DataFrame(
        {"epoch": range(len(report.loss_history)), "mse": report.loss_history}
    )
    df.to_csv(path, index=False)
