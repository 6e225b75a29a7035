"""Lag embedding, min-max scaling and contiguous hold-out splits.

A LagDataset row for serial number t holds the inputs (y[t-1], ..., y[t-p])
and the target y[t]. Rows keep serial order; nothing here shuffles.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union

import numpy as np

from ragalib.errors import (
    ConfigError,
    DegenerateScaleError,
    EmptyDataError,
    InsufficientDataError,
    SplitError,
)
from ragalib.notation import NoteSequence


@dataclass(frozen=True, eq=False)
class LagDataset:
    p: int
    inputs: np.ndarray  # (rows, p), column i-1 holds lag i
    targets: np.ndarray  # (rows,)
    origin_indices: np.ndarray  # (rows,) 1-based serial number t of each target

    def __post_init__(self):
        for arr in (self.inputs, self.targets, self.origin_indices):
            arr.flags.writeable = False

    def __len__(self) -> int:
        return len(self.targets)

    @property
    def rows(self) -> list[tuple[tuple[float, ...], float]]:
        return [
            (tuple(float(x) for x in row), float(target))
            for row, target in zip(self.inputs, self.targets)
        ]

    def slice(self, start: int, stop: int) -> "LagDataset":
        return LagDataset(
            p=self.p,
            inputs=self.inputs[start:stop].copy(),
            targets=self.targets[start:stop].copy(),
            origin_indices=self.origin_indices[start:stop].copy(),
        )

    def scaled(self, scaler_in: "Scaler", scaler_out: "Scaler") -> "LagDataset":
        return LagDataset(
            p=self.p,
            inputs=scaler_in.apply(self.inputs),
            targets=scaler_out.apply(self.targets),
            origin_indices=self.origin_indices.copy(),
        )


def embed_lags(seq: Union[NoteSequence, Iterable[float]], p: int) -> LagDataset:
    if p < 1:
        raise ConfigError(f"lag order p must be >= 1, got {p}")
    y = np.asarray(list(seq), dtype=float)
    n = len(y)
    if p >= n:
        raise InsufficientDataError(
            f"need more than p={p} values to embed, got {n}"
        )
    inputs = np.column_stack([y[p - i : n - i] for i in range(1, p + 1)])
    return LagDataset(
        p=p,
        inputs=inputs,
        targets=y[p:].copy(),
        origin_indices=np.arange(p + 1, n + 1),
    )


class ScalerKind(str, Enum):
    NONE = "none"
    MINMAX = "minmax"


@dataclass(frozen=True)
class Scaler:
    kind: ScalerKind = ScalerKind.NONE
    lo: float = 0.0
    hi: float = 1.0
    src_min: float = 0.0
    src_max: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ScalerKind(self.kind))
        if self.kind is ScalerKind.MINMAX:
            if not self.src_max > self.src_min:
                raise DegenerateScaleError(
                    f"source range [{self.src_min}, {self.src_max}] is empty"
                )
            if not self.hi > self.lo:
                raise ConfigError(f"target interval [{self.lo}, {self.hi}] is empty")

    def apply(self, x):
        if self.kind is ScalerKind.NONE:
            return np.array(x, dtype=float) if np.ndim(x) else float(x)
        factor = (self.hi - self.lo) / (self.src_max - self.src_min)
        return self.lo + (np.asarray(x, dtype=float) - self.src_min) * factor

    def invert(self, x):
        if self.kind is ScalerKind.NONE:
            return np.array(x, dtype=float) if np.ndim(x) else float(x)
        factor = (self.src_max - self.src_min) / (self.hi - self.lo)
        return self.src_min + (np.asarray(x, dtype=float) - self.lo) * factor

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "lo": self.lo,
            "hi": self.hi,
            "src_min": self.src_min,
            "src_max": self.src_max,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Scaler":
        return cls(
            kind=ScalerKind(data["kind"]),
            lo=float(data.get("lo", 0.0)),
            hi=float(data.get("hi", 1.0)),
            src_min=float(data.get("src_min", 0.0)),
            src_max=float(data.get("src_max", 1.0)),
        )


IDENTITY_SCALER = Scaler()


def fit_scaler(values: Iterable[float], lo: float, hi: float) -> Scaler:
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise EmptyDataError("cannot fit a scaler to no values")
    if not hi > lo:
        raise ConfigError(f"target interval [{lo}, {hi}] is empty")
    src_min, src_max = float(arr.min()), float(arr.max())
    if not src_max > src_min:
        raise DegenerateScaleError(
            f"all values equal {src_min}; min-max scaling is undefined"
        )
    return Scaler(ScalerKind.MINMAX, float(lo), float(hi), src_min, src_max)


@dataclass(frozen=True)
class ScalingSpec:
    """Which scaler the fitting pipeline builds.

    minmax maps inputs to [-1, 1] and targets to the output activation's
    range: [0, 1] for sigmoid, [-1, 1] otherwise.
    """

    kind: ScalerKind = ScalerKind.MINMAX

    def __post_init__(self):
        object.__setattr__(self, "kind", ScalerKind(self.kind))


def fit_pipeline_scalers(
    output_act: str, values: Iterable[float], spec: ScalingSpec = ScalingSpec()
) -> tuple[Scaler, Scaler]:
    """Return (scaler_in, scaler_out) fitted to the raw series values."""
    if spec.kind is ScalerKind.NONE:
        return IDENTITY_SCALER, IDENTITY_SCALER
    values = list(values)
    scaler_in = fit_scaler(values, -1.0, 1.0)
    out_lo = 0.0 if str(getattr(output_act, "value", output_act)) == "sigmoid" else -1.0
    scaler_out = fit_scaler(values, out_lo, 1.0)
    return scaler_in, scaler_out


@dataclass(frozen=True)
class SplitSpec:
    """Contiguous tail split: training is the head, hold-out the tail."""

    holdout_fraction: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.holdout_fraction < 1.0:
            raise ConfigError(
                f"holdout_fraction must lie in [0, 1), got {self.holdout_fraction}"
            )

    def holdout_rows(self, rows: int) -> int:
        # Round half up; Python's round() would send 0.5 to the even neighbour.
        return int(math.floor(self.holdout_fraction * rows + 0.5))


def split(ds: LagDataset, spec: SplitSpec) -> tuple[LagDataset, LagDataset]:
    rows = len(ds)
    n_hold = spec.holdout_rows(rows)
    n_train = rows - n_hold
    if n_train < 1:
        raise SplitError(
            f"holdout fraction {spec.holdout_fraction} leaves no training rows "
            f"out of {rows}"
        )
    return ds.slice(0, n_train), ds.slice(n_train, rows)
