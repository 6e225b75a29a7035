"""RMSE/MAE metrics, the fit-and-evaluate pipeline and architecture sweeps.

Metrics are always in raw pitch units: predictions are inverse-scaled
before residuals are taken. RMSE is the root of the mean squared residual.

A sweep trains every grid entry independently with seed base_seed XOR row,
so adding rows never perturbs existing cells, and picks the best cell by
(rmse, parameter count, mae, grid order).
"""

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ragalib.errors import EmptyDataError, GridError, NumericFailure, SweepError
from ragalib.modelfile import DATA_DIR, ModelFile
from ragalib.network import Activation, NetworkConfig, Prediction, predict_series
from ragalib.notation import NoteSequence
from ragalib.result_collector import ResultCollector
from ragalib.series import ScalingSpec, SplitSpec, embed_lags, fit_pipeline_scalers, split
from ragalib.training import TrainConfig, TrainReport, train
from ragalib.util import SEED_MASK, SharedProgress

TABLE1C_GRID_PATH = os.path.join(DATA_DIR, "table1c.csv")

SWEEP_COLUMNS = [
    "row",
    "label",
    "p",
    "q",
    "hidden_act",
    "output_act",
    "rmse",
    "mae",
    "params",
    "seconds",
    "seed",
    "note",
]


@dataclass(frozen=True)
class MetricPair:
    rmse: float
    mae: float


def residuals(preds: Sequence[Prediction]) -> np.ndarray:
    if len(preds) == 0:
        raise EmptyDataError("no predictions to take residuals of")
    return np.array([p.observed - p.predicted for p in preds], dtype=float)


def _as_residuals(e) -> np.ndarray:
    e = np.asarray(e, dtype=float).reshape(-1)
    if e.size == 0:
        raise EmptyDataError("residual vector is empty")
    return e


def mae(e) -> float:
    e = _as_residuals(e)
    return float(np.mean(np.abs(e)))


def rmse(e) -> float:
    e = _as_residuals(e)
    return float(np.sqrt(np.mean(e * e)))


def metrics(preds: Sequence[Prediction]) -> MetricPair:
    e = residuals(preds)
    return MetricPair(rmse=rmse(e), mae=mae(e))


@dataclass(frozen=True)
class GridEntry:
    """One sweep configuration. Unpacks as (net_cfg, train_cfg)."""

    net_cfg: NetworkConfig
    train_cfg: TrainConfig = TrainConfig()
    row: int = 0
    note: str = ""
    printed_label: str = ""
    reported: Optional[MetricPair] = None

    def __iter__(self):
        yield self.net_cfg
        yield self.train_cfg


def load_grid_csv(
    path: Union[str, os.PathLike], train_cfg: TrainConfig = TrainConfig()
) -> list[GridEntry]:
    """Read a grid CSV with columns p,q,hidden_act,output_act and optional
    row, note, printed_label, reported_rmse, reported_mae."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"Grid file not found: {path}")
    try:
        df = pd.read_csv(path, comment="#", dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise GridError(f"grid file {path} is empty") from None
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise GridError(f"grid file {path} is not a readable CSV: {e}") from e
    missing = {"p", "q", "hidden_act", "output_act"} - set(df.columns)
    if missing:
        raise GridError(f"grid file {path} lacks columns: {', '.join(sorted(missing))}")
    if df.empty:
        raise GridError(f"grid file {path} has no rows")

    entries = []
    for idx, rec in enumerate(df.to_dict("records"), start=1):
        try:
            net_cfg = NetworkConfig(
                p=int(rec["p"]),
                q=int(rec["q"]),
                hidden_act=Activation.parse(rec["hidden_act"]),
                output_act=Activation.parse(rec["output_act"]),
            )
        except ValueError as e:
            raise GridError(f"grid file {path}, row {idx}: {e}") from e
        reported = None
        if rec.get("reported_rmse") and rec.get("reported_mae"):
            reported = MetricPair(float(rec["reported_rmse"]), float(rec["reported_mae"]))
        entries.append(
            GridEntry(
                net_cfg=net_cfg,
                train_cfg=train_cfg,
                row=int(rec["row"]) if rec.get("row") else idx,
                note=rec.get("note", ""),
                printed_label=rec.get("printed_label", ""),
                reported=reported,
            )
        )
    return entries


def table1c_grid(train_cfg: TrainConfig = TrainConfig()) -> list[GridEntry]:
    """The 38 published configurations in row order.

    The "activation for input" column is the hidden-layer activation (input
    nodes only pass values through). Where a printed label disagrees with the
    hidden-units column, q comes from the units column and the row's note
    says so.
    """
    return load_grid_csv(TABLE1C_GRID_PATH, train_cfg)


@dataclass(frozen=True, eq=False)
class FitResult:
    model: ModelFile
    report: TrainReport
    metrics: MetricPair
    predictions: tuple[Prediction, ...]  # evaluation set only


def fit_and_evaluate(
    net_cfg: NetworkConfig,
    train_cfg: TrainConfig,
    seq: NoteSequence,
    scaling: ScalingSpec = ScalingSpec(),
    split_spec: SplitSpec = SplitSpec(),
    jobs: int = 1,
    progress: Optional[SharedProgress] = None,
) -> FitResult:
    """Scale, train and score one configuration.

    Scalers are fitted on the series values the training rows can see. With
    no hold-out the evaluation set is the full fitted series; otherwise it is
    the hold-out tail.
    """
    ds_raw = embed_lags(seq, net_cfg.p)
    train_raw, holdout_raw = split(ds_raw, split_spec)
    seen = list(seq)[: net_cfg.p + len(train_raw)]
    scaler_in, scaler_out = fit_pipeline_scalers(net_cfg.output_act, seen, scaling)

    report = train(
        net_cfg,
        train_cfg,
        train_raw.scaled(scaler_in, scaler_out),
        jobs=jobs,
        progress=progress,
    )
    preds = predict_series(report.final_weights, net_cfg, seq, scaler_in, scaler_out)
    if len(holdout_raw):
        first_holdout = int(holdout_raw.origin_indices[0])
        preds = [p for p in preds if p.t >= first_holdout]
    if not all(math.isfinite(p.predicted) for p in preds):
        raise NumericFailure(f"{net_cfg.label}: non-finite predictions")
    scores = metrics(preds)
    model = ModelFile(
        config=net_cfg,
        weights=report.final_weights,
        scaler_in=scaler_in,
        scaler_out=scaler_out,
        metadata={
            "seed": report.best_restart_seed,
            "epochs": report.epochs_run,
            "final_rmse": scores.rmse,
            "final_mae": scores.mae,
            "holdout_fraction": split_spec.holdout_fraction,
        },
    )
    return FitResult(model, report, scores, tuple(preds))


@dataclass(frozen=True)
class SweepCell:
    row: int
    net_cfg: NetworkConfig
    metrics: MetricPair
    parameter_count: int
    train_seconds: float
    seed: int
    note: str = ""
    failed: bool = False
    printed_label: str = ""
    reported: Optional[MetricPair] = None

    @property
    def label(self) -> str:
        return self.net_cfg.label


def _pick(candidates: list[tuple[float, int, float, int]]) -> int:
    if not candidates:
        raise SweepError("every sweep cell diverged")
    return min(candidates)[3]


def select_best(cells: Sequence[SweepCell]) -> int:
    """Minimal RMSE; ties by fewer parameters, then lower MAE, then order."""
    return _pick(
        [
            (c.metrics.rmse, c.parameter_count, c.metrics.mae, idx)
            for idx, c in enumerate(cells)
            if not c.failed
        ]
    )


def select_best_frame(df: pd.DataFrame) -> int:
    """select_best over a sweep table (CSV or parquet rows); positional index.

    Rows flagged `failed` or with a NaN RMSE never win.
    """
    failed = df["failed"].astype(bool) if "failed" in df.columns else [False] * len(df)
    return _pick(
        [
            (float(r), int(p), float(m), idx)
            for idx, (r, p, m, f) in enumerate(zip(df["rmse"], df["params"], df["mae"], failed))
            if not f and not math.isnan(float(r))
        ]
    )


@dataclass(frozen=True)
class SweepReport:
    cells: tuple[SweepCell, ...]
    best: int
    run_id: str = ""

    @property
    def best_cell(self) -> SweepCell:
        return self.cells[self.best]

    def to_frame(self, timings: bool = True) -> pd.DataFrame:
        rows = []
        for c in self.cells:
            rows.append(
                {
                    "row": c.row,
                    "label": c.label,
                    "p": c.net_cfg.p,
                    "q": c.net_cfg.q,
                    "hidden_act": c.net_cfg.hidden_act.value,
                    "output_act": c.net_cfg.output_act.value,
                    "rmse": c.metrics.rmse,
                    "mae": c.metrics.mae,
                    "params": c.parameter_count,
                    "seconds": c.train_seconds if timings else 0.0,
                    "seed": str(c.seed),
                    "note": c.note,
                }
            )
        return pd.DataFrame(rows, columns=SWEEP_COLUMNS)

    def write_csv(self, path: Union[str, os.PathLike], timings: bool = False) -> None:
        """Sweep CSV, decimals at 6 significant digits.

        Wall-clock seconds vary run to run, so they are written only when
        `timings` is set; otherwise the column is 0 and the file is
        reproducible byte for byte.
        """
        self.to_frame(timings=timings).to_csv(
            path, index=False, float_format="%.6g", na_rep="nan", lineterminator="\n"
        )


def read_sweep_csv(path: Union[str, os.PathLike]) -> pd.DataFrame:
    df = pd.read_csv(path, dtype={"note": str, "seed": str}, keep_default_na=False)
    missing = set(SWEEP_COLUMNS) - set(df.columns)
    if missing:
        raise GridError(f"{path} is not a sweep report; missing {sorted(missing)}")
    for col in ("rmse", "mae", "seconds"):
        df[col] = pd.to_numeric(df[col])
    return df


def _evaluate_cell(
    entry: GridEntry,
    seq: NoteSequence,
    scaling: ScalingSpec,
    split_spec: SplitSpec,
    seed: int,
) -> SweepCell:
    start = time.perf_counter()
    failed, note = False, entry.note
    try:
        scores = fit_and_evaluate(
            entry.net_cfg, entry.train_cfg.with_seed(seed), seq, scaling, split_spec
        ).metrics
    except NumericFailure:
        failed = True
        scores = MetricPair(float("nan"), float("nan"))
        note = f"{note}; diverged" if note else "diverged"
    return SweepCell(
        row=entry.row,
        net_cfg=entry.net_cfg,
        metrics=scores,
        parameter_count=entry.net_cfg.parameter_count,
        train_seconds=time.perf_counter() - start,
        seed=seed,
        note=note,
        failed=failed,
        printed_label=entry.printed_label,
        reported=entry.reported,
    )


def _as_entries(grid: Iterable) -> list[GridEntry]:
    entries = []
    for idx, item in enumerate(grid, start=1):
        if isinstance(item, GridEntry):
            entries.append(item if item.row else replace(item, row=idx))
        else:
            net_cfg, train_cfg = item
            entries.append(GridEntry(net_cfg, train_cfg, row=idx))
    return entries


def run_sweep(
    grid: Iterable[Union[GridEntry, tuple[NetworkConfig, TrainConfig]]],
    seq: NoteSequence,
    scaling: ScalingSpec = ScalingSpec(),
    split_spec: SplitSpec = SplitSpec(),
    base_seed: Optional[int] = None,
    jobs: int = 1,
    progress: Optional[SharedProgress] = None,
    collector: Optional[ResultCollector] = None,
) -> SweepReport:
    """Train and score every grid entry; the report order is the grid order.

    base_seed defaults to the first entry's TrainConfig seed.
    """
    entries = _as_entries(grid)
    if not entries:
        raise GridError("sweep grid is empty")
    if base_seed is None:
        base_seed = entries[0].train_cfg.seed

    def worker(entry: GridEntry) -> SweepCell:
        cell = _evaluate_cell(
            entry, seq, scaling, split_spec, (base_seed ^ entry.row) & SEED_MASK
        )
        if collector is not None:
            collector.record_cell(cell)
        if progress is not None:
            progress.update()
            if cell.failed:
                progress.write(f"Row {cell.row} ({cell.label}) diverged")
        return cell

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            cells = list(executor.map(worker, entries))
    else:
        cells = [worker(e) for e in entries]

    return SweepReport(
        cells=tuple(cells),
        best=select_best(cells),
        run_id=collector.run_id if collector is not None else "",
    )
