"""Flags and output helpers shared by the subcommands.

Standard output carries `key=value` lines only (plus a pandas table under
--pretty); progress and diagnostics go to standard error.
"""

import argparse
import math
import os
import sys
from typing import Optional

import pandas as pd

from ragalib.errors import ConfigError
from ragalib.modelfile import ModelFile, load_model, table2_model
from ragalib.network import Activation, NetworkConfig
from ragalib.notation import RAGA_PROFILES, NoteSequence, load_corpus, load_corpus_file
from ragalib.series import ScalerKind, ScalingSpec, SplitSpec
from ragalib.training import TrainConfig
from ragalib.util import SharedProgress, check_seed

SEED_ENV_VAR = "RAGA_SEED"

ACTIVATION_CHOICES = [a.value for a in Activation]


def add_corpus_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--corpus",
        type=str,
        help="Note sequence file: swara/numeric tokens, or a sr,pitch CSV",
    )
    group.add_argument(
        "--builtin-corpus",
        action="store_true",
        help="Use the embedded 240-note Bageshree sequence (the default)",
    )


def load_corpus_arg(args: argparse.Namespace) -> NoteSequence:
    if args.corpus:
        return load_corpus_file(args.corpus)
    return load_corpus()


def add_seed_arg(parser: argparse.ArgumentParser, help_text: str = "Random seed") -> None:
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"{help_text} (default: ${SEED_ENV_VAR}, else 0)",
    )


def resolve_seed(args: argparse.Namespace) -> int:
    """--seed, else $RAGA_SEED, else 0."""
    if args.seed is not None:
        return check_seed(args.seed)
    raw = os.environ.get(SEED_ENV_VAR, "").strip()
    if not raw:
        return 0
    try:
        return check_seed(int(raw))
    except ValueError:
        raise ConfigError(f"{SEED_ENV_VAR}={raw!r} is not an integer seed") from None


def add_network_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int, default=2, help="Input lags (default: 2)")
    parser.add_argument("--q", type=int, default=4, help="Hidden units (default: 4)")
    parser.add_argument(
        "--hidden",
        type=str,
        choices=ACTIVATION_CHOICES,
        default=Activation.TANH.value,
        help="Hidden-layer activation (default: tanh)",
    )
    parser.add_argument(
        "--output",
        type=str,
        choices=ACTIVATION_CHOICES,
        default=Activation.IDENTITY.value,
        help="Output activation (default: identity)",
    )


def network_config(args: argparse.Namespace) -> NetworkConfig:
    return NetworkConfig(args.p, args.q, args.hidden, args.output)


def add_train_args(parser: argparse.ArgumentParser) -> None:
    defaults = TrainConfig()
    parser.add_argument(
        "--eta", type=float, default=defaults.eta, help=f"Learning rate (default: {defaults.eta})"
    )
    parser.add_argument(
        "--delta",
        type=float,
        default=defaults.delta,
        help=f"Momentum in [0, 1] (default: {defaults.delta})",
    )
    parser.add_argument(
        "--epochs",
        type=int,
        default=defaults.max_epochs,
        help=f"Maximum epochs per restart (default: {defaults.max_epochs})",
    )
    parser.add_argument(
        "--patience",
        type=int,
        default=defaults.patience,
        help=f"Epochs without improvement before stopping (default: {defaults.patience})",
    )
    parser.add_argument(
        "--min-improvement",
        type=float,
        default=defaults.min_improvement,
        help=f"Loss decrease that counts as improvement (default: {defaults.min_improvement})",
    )
    parser.add_argument(
        "--restarts",
        type=int,
        default=defaults.restarts,
        help=f"Seeded initialisations per fit (default: {defaults.restarts})",
    )
    add_seed_arg(parser)


def train_config(args: argparse.Namespace) -> TrainConfig:
    return TrainConfig(
        eta=args.eta,
        delta=args.delta,
        max_epochs=args.epochs,
        patience=args.patience,
        min_improvement=args.min_improvement,
        seed=resolve_seed(args),
        restarts=args.restarts,
    )


def add_pipeline_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--scaling",
        type=str,
        choices=[k.value for k in ScalerKind],
        default=ScalerKind.MINMAX.value,
        help="Series scaling before training (default: minmax)",
    )
    parser.add_argument(
        "--holdout",
        type=float,
        default=0.0,
        help="Fraction of lag rows held out from the tail for scoring (default: 0)",
    )


def pipeline_specs(args: argparse.Namespace) -> tuple[ScalingSpec, SplitSpec]:
    return ScalingSpec(args.scaling), SplitSpec(args.holdout)


def add_model_source_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--model", type=str, help="Model file written by `train -o`")
    group.add_argument(
        "--builtin-table2",
        action="store_true",
        help="Use the bundled published N^{2-4-1} weights",
    )
    parser.add_argument(
        "--table2-hidden",
        type=str,
        choices=[Activation.TANH.value, Activation.SIGMOID.value],
        default=Activation.TANH.value,
        help="Hidden activation applied to the bundled weights (default: tanh)",
    )
    parser.add_argument(
        "--raw",
        action="store_true",
        help="Apply the weights to raw pitch values, ignoring any scalers",
    )


def load_model_arg(args: argparse.Namespace) -> ModelFile:
    if args.builtin_table2:
        scaling = ScalingSpec(ScalerKind.NONE if args.raw else ScalerKind.MINMAX)
        return table2_model(args.table2_hidden, scaling)
    model = load_model(args.model)
    if args.raw:
        return ModelFile(model.config, model.weights, metadata=model.metadata)
    return model


def add_raga_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--raga",
        type=str,
        choices=sorted(RAGA_PROFILES),
        default="bageshree",
        help="Raga profile to validate against (default: bageshree)",
    )


def add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--pretty", action="store_true", help="Also print a human-readable table"
    )
    parser.add_argument(
        "--no-progress", action="store_true", help="Disable the progress bar"
    )


def make_progress(args: argparse.Namespace, total: int, desc: str) -> SharedProgress:
    return SharedProgress(total=total, desc=desc, disable=args.no_progress)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return "nan" if math.isnan(value) else f"{value:.6g}"
    return str(value)


def emit(**pairs) -> None:
    """Print one `key=value` line to standard output."""
    print(" ".join(f"{k}={_format_value(v)}" for k, v in pairs.items()))


def emit_table(df: pd.DataFrame, title: Optional[str] = None) -> None:
    if title:
        print(f"\n{title}")
    print(df.to_string(index=False, float_format=lambda v: f"{v:.4f}"))


def log(msg: str) -> None:
    print(msg, file=sys.stderr)
