#!/usr/bin/env python3
"""
Bar chart of retrained RMSE per sweep row next to the published Table 1C value.

Reads either the sweep CSV (`sweep -o`) or the parquet written under
`sweep --output-dir`.

Usage:
    python scripts/plot_sweep.py sweep.csv -o sweep.png
    python scripts/plot_sweep.py run_stats/<run_id>.parquet --metric mae
"""

import argparse

import matplotlib

matplotlib.use("Agg")  # Use non-interactive backend
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from ragalib.selection import read_sweep_csv, select_best_frame, table1c_grid

BUILTIN_ROWS = {e.row: e for e in table1c_grid()}


def load_sweep(path: str) -> pd.DataFrame:
    if path.endswith(".parquet"):
        df = pd.read_parquet(path).sort_values("row")
    else:
        df = read_sweep_csv(path)
    if "reported_rmse" not in df.columns:
        reported = [published_metrics(rec) for rec in df.itertuples()]
        df["reported_rmse"] = [m.rmse if m else np.nan for m in reported]
        df["reported_mae"] = [m.mae if m else np.nan for m in reported]
    return df.reset_index(drop=True)


def published_metrics(rec):
    """Published Table 1C metrics for a row, only if it is the builtin configuration."""
    entry = BUILTIN_ROWS.get(rec.row)
    if entry is None or entry.reported is None:
        return None
    cfg = entry.net_cfg
    builtin = (cfg.p, cfg.q, cfg.hidden_act.value, cfg.output_act.value)
    if builtin != (rec.p, rec.q, rec.hidden_act, rec.output_act):
        return None
    return entry.reported


def plot_sweep(df: pd.DataFrame, metric: str, output_path: str = None):
    fig, ax = plt.subplots(figsize=(14, 6))
    x = np.arange(len(df))
    width = 0.4

    ax.bar(x - width / 2, df[metric], width, label="Retrained", color="tab:blue")
    ax.bar(
        x + width / 2,
        df[f"reported_{metric}"],
        width,
        label="Published",
        color="tab:gray",
    )

    best = select_best_frame(df)
    ax.bar(x[best] - width / 2, df[metric][best], width, color="tab:red", label="Best")

    ax.set_xticks(x)
    ax.set_xticklabels(
        [f"{r} {lbl}" for r, lbl in zip(df["row"], df["label"])],
        rotation=90,
        fontsize=7,
    )
    ax.set_ylabel(metric.upper(), fontsize=12)
    ax.set_title(f"{metric.upper()} per sweep row", fontsize=14, fontweight="bold")
    ax.legend()
    ax.yaxis.grid(True, linestyle="--", alpha=0.7)
    ax.set_axisbelow(True)
    plt.tight_layout()

    if output_path:
        plt.savefig(output_path, dpi=150, bbox_inches="tight")
        print(f"Plot saved to {output_path}")
    else:
        plt.show()
    return fig


def main():
    parser = argparse.ArgumentParser(description="Plot sweep RMSE/MAE per row")
    parser.add_argument("sweep_file", type=str, help="Sweep CSV or parquet")
    parser.add_argument(
        "--metric", type=str, choices=["rmse", "mae"], default="rmse"
    )
    parser.add_argument(
        "-o",
        "--output",
        type=str,
        default=None,
        help="Output path for the plot (PNG). If not specified, displays plot.",
    )
    parser.add_argument(
        "--show-stats", action="store_true", help="Print the sweep table to console"
    )
    args = parser.parse_args()

    print(f"Loading data from {args.sweep_file}...")
    df = load_sweep(args.sweep_file)
    print(f"Loaded {len(df)} rows")
    if args.show_stats:
        cols = ["row", "label", "hidden_act", "output_act", "rmse", "mae",
                "reported_rmse", "reported_mae"]
        print(df[cols].to_string(index=False))

    plot_sweep(df, args.metric, args.output)


if __name__ == "__main__":
    main()
