"""Subcommands for the autoregressive network: train, sweep, replay, predict."""

import argparse
import math

import numpy as np
import pandas as pd

from ragabench.commands import common
from ragabench.commands.base import Command
from ragalib.errors import GridError
from ragalib.modelfile import save_model
from ragalib.network import forecast, predict_series
from ragalib.notation import PITCH_MAX, PITCH_MIN, decode_pitch
from ragalib.result_collector import ResultCollector
from ragalib.selection import (
    fit_and_evaluate,
    load_grid_csv,
    metrics,
    run_sweep,
    table1c_grid,
)
from ragalib.training import write_loss_csv


class TrainCommand(Command):
    name = "train"
    help = "Fit one network configuration and report RMSE/MAE."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        common.add_corpus_args(parser)
        common.add_network_args(parser)
        common.add_train_args(parser)
        common.add_pipeline_args(parser)
        parser.add_argument("-o", "--out", type=str, help="Write the fitted model here (JSON)")
        parser.add_argument(
            "--loss-csv", type=str, help="Write the winning restart's epoch,mse curve here"
        )
        parser.add_argument(
            "--jobs", type=int, default=1, help="Threads for restarts (default: 1)"
        )
        common.add_output_args(parser)

    def run(self, args: argparse.Namespace) -> int:
        seq = common.load_corpus_arg(args)
        net_cfg = common.network_config(args)
        train_cfg = common.train_config(args)
        scaling, split_spec = common.pipeline_specs(args)

        common.log(
            f"Training {net_cfg.label} ({net_cfg.hidden_act.value}/"
            f"{net_cfg.output_act.value}) on {len(seq)} notes, seed {train_cfg.seed}"
        )
        with common.make_progress(args, train_cfg.restarts, "Restarts") as progress:
            result = fit_and_evaluate(
                net_cfg, train_cfg, seq, scaling, split_spec, args.jobs, progress
            )

        if args.out:
            save_model(result.model, args.out)
            common.log(f"Wrote model to {args.out}")
        if args.loss_csv:
            write_loss_csv(result.report, args.loss_csv)
            common.log(f"Wrote loss curve to {args.loss_csv}")

        common.emit(rmse=result.metrics.rmse, mae=result.metrics.mae)
        common.emit(
            label=net_cfg.label,
            epochs=result.report.epochs_run,
            seed=result.report.best_restart_seed,
            mse=result.report.final_mse,
        )
        if args.pretty:
            restarts = pd.DataFrame([vars(r) for r in result.report.restarts])
            common.emit_table(restarts, "Restarts")
        return 0


class SweepCommand(Command):
    name = "sweep"
    help = "Train every configuration of a grid and rank them by RMSE."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        grid = parser.add_mutually_exclusive_group()
        grid.add_argument(
            "--table1c",
            action="store_true",
            help="Use the builtin 38-row Table 1C grid (the default)",
        )
        grid.add_argument(
            "--grid", type=str, help="CSV with columns p,q,hidden_act,output_act[,note]"
        )
        common.add_corpus_args(parser)
        common.add_train_args(parser)
        common.add_pipeline_args(parser)
        parser.add_argument("-o", "--out", type=str, help="Write the sweep CSV here")
        parser.add_argument(
            "--timings",
            action="store_true",
            help="Write wall-clock seconds to the CSV (the file is then not reproducible)",
        )
        parser.add_argument(
            "--output-dir",
            type=str,
            help="Also append every cell to <output-dir>/<run_id>.parquet",
        )
        parser.add_argument(
            "--jobs", type=int, default=1, help="Threads for grid cells (default: 1)"
        )
        common.add_output_args(parser)

    def run(self, args: argparse.Namespace) -> int:
        seq = common.load_corpus_arg(args)
        train_cfg = common.train_config(args)
        scaling, split_spec = common.pipeline_specs(args)
        if args.grid:
            grid = load_grid_csv(args.grid, train_cfg)
        else:
            grid = table1c_grid(train_cfg)
        if not grid:
            raise GridError("sweep grid is empty")

        collector = None
        if args.output_dir:
            collector = ResultCollector(output_dir=args.output_dir)

        common.log(f"Sweeping {len(grid)} configurations, base seed {train_cfg.seed}")
        with common.make_progress(args, len(grid), "Cells") as progress:
            report = run_sweep(
                grid,
                seq,
                scaling,
                split_spec,
                base_seed=train_cfg.seed,
                jobs=args.jobs,
                progress=progress,
                collector=collector,
            )

        if args.out:
            report.write_csv(args.out, timings=args.timings)
            common.log(f"Wrote sweep to {args.out}")
        if collector is not None:
            collector.write_to_parquet()

        best = report.best_cell
        common.emit(
            best_row=best.row,
            best_label=best.label,
            best_rmse=best.metrics.rmse,
            best_mae=best.metrics.mae,
        )
        failed = sum(c.failed for c in report.cells)
        common.emit(cells=len(report.cells), diverged=failed)
        if args.pretty:
            df = report.to_frame(timings=True)
            df["reported_rmse"] = [
                c.reported.rmse if c.reported else math.nan for c in report.cells
            ]
            df["reported_mae"] = [
                c.reported.mae if c.reported else math.nan for c in report.cells
            ]
            common.emit_table(df.drop(columns=["seed"]), "Sweep")
        return 0


class ReplayCommand(Command):
    name = "replay"
    help = "Run a fixed model over the corpus and write observed vs predicted."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        common.add_model_source_args(parser)
        common.add_corpus_args(parser)
        parser.add_argument(
            "-o", "--out", type=str, help="Write t,observed,predicted rows here (CSV)"
        )
        parser.add_argument(
            "--pretty", action="store_true", help="Also print a human-readable table"
        )

    def run(self, args: argparse.Namespace) -> int:
        model = common.load_model_arg(args)
        seq = common.load_corpus_arg(args)
        preds = predict_series(
            model.weights, model.config, seq, model.scaler_in, model.scaler_out
        )
        df = pd.DataFrame(
            {
                "t": [p.t for p in preds],
                "observed": [p.observed for p in preds],
                "predicted": [p.predicted for p in preds],
            }
        )
        if args.out:
            df.to_csv(args.out, index=False, float_format="%.6g", lineterminator="\n")
            common.log(f"Wrote {len(df)} rows to {args.out}")

        finite = bool(np.all(np.isfinite(df["predicted"])))
        scores = metrics(preds)
        common.emit(rmse=scores.rmse, mae=scores.mae)
        common.emit(label=model.config.label, rows=len(df), finite=finite)
        if args.pretty:
            common.emit_table(df, "Replay")
        return 0


class PredictCommand(Command):
    name = "predict"
    help = "Forecast the notes that follow the corpus with a fixed model."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        common.add_model_source_args(parser)
        common.add_corpus_args(parser)
        parser.add_argument(
            "--steps", type=int, default=1, help="Notes to forecast (default: 1)"
        )

    def run(self, args: argparse.Namespace) -> int:
        model = common.load_model_arg(args)
        seq = common.load_corpus_arg(args)
        preds = forecast(
            model.weights,
            model.config,
            seq,
            args.steps,
            model.scaler_in,
            model.scaler_out,
        )
        for p in preds:
            if math.isfinite(p.predicted):
                nearest = min(max(round(p.predicted), PITCH_MIN), PITCH_MAX)
                swara = str(decode_pitch(nearest))
            else:
                swara = "?"
            common.emit(t=p.t, value=p.predicted, swara=swara)
        return 0
