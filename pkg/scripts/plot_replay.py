#!/usr/bin/env python3
"""
Plot observed vs predicted notes from a `replay` CSV (t,observed,predicted).

Usage:
    python -m ragabench.runner replay --builtin-table2 -o fig2.csv
    python scripts/plot_replay.py fig2.csv -o fig2.png
"""

import argparse

import matplotlib

matplotlib.use("Agg")  # Use non-interactive backend
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from ragalib.notation import decode_pitch
from ragalib.selection import mae, rmse


def load_replay(csv_path: str) -> pd.DataFrame:
    df = pd.read_csv(csv_path)
    missing = {"t", "observed", "predicted"} - set(df.columns)
    if missing:
        raise SystemExit(f"Error: {csv_path} lacks columns {sorted(missing)}")
    return df


def plot_replay(df: pd.DataFrame, title: str, output_path: str = None):
    """Line plot of both series against serial number, swara names on the y axis."""
    fig, ax = plt.subplots(figsize=(12, 5))
    ax.plot(df["t"], df["observed"], color="tab:blue", linewidth=1.2, label="Observed")
    ax.plot(
        df["t"],
        df["predicted"],
        color="tab:red",
        linewidth=1.2,
        linestyle="--",
        label="Predicted",
    )

    lo = int(np.floor(min(df["observed"].min(), df["predicted"].min())))
    hi = int(np.ceil(max(df["observed"].max(), df["predicted"].max())))
    ticks = [v for v in range(max(lo, -12), min(hi, 23) + 1)]
    ax.set_yticks(ticks)
    ax.set_yticklabels([f"{v} ({decode_pitch(v)})" for v in ticks], fontsize=7)

    ax.set_xlabel("Serial number", fontsize=12)
    ax.set_ylabel("Pitch", fontsize=12)
    ax.set_title(title, fontsize=14, fontweight="bold")
    ax.legend()
    ax.yaxis.grid(True, linestyle="--", alpha=0.5)
    ax.set_axisbelow(True)
    plt.tight_layout()

    if output_path:
        plt.savefig(output_path, dpi=150, bbox_inches="tight")
        print(f"Plot saved to {output_path}")
    else:
        plt.show()
    return fig


def main():
    parser = argparse.ArgumentParser(description="Plot a replay CSV")
    parser.add_argument("csv_file", type=str, help="CSV written by `replay -o`")
    parser.add_argument(
        "-o",
        "--output",
        type=str,
        default=None,
        help="Output path for the plot (PNG). If not specified, displays plot.",
    )
    parser.add_argument(
        "--title", type=str, default="Observed and predicted", help="Plot title"
    )
    args = parser.parse_args()

    df = load_replay(args.csv_file)
    residual = (df["observed"] - df["predicted"]).to_numpy()
    print(f"Loaded {len(df)} rows; rmse={rmse(residual):.4f} mae={mae(residual):.4f}")
    plot_replay(df, args.title, args.output)


if __name__ == "__main__":
    main()
