"""Subcommands that only read or rewrite a note sequence: validate, export-corpus."""

import argparse
import sys

import pandas as pd

from ragabench.commands import common
from ragabench.commands.base import Command
from ragalib.notation import (
    RAGA_PROFILES,
    SWARA_LETTERS,
    pitch_class_histogram,
    render_sequence,
    validate_against_raga,
)

EXPORT_FORMATS = ("swara", "numeric", "csv")


class ValidateCommand(Command):
    name = "validate"
    help = "Count notes that fall outside a raga's permitted pitch classes."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        common.add_corpus_args(parser)
        common.add_raga_arg(parser)
        parser.add_argument(
            "--pretty", action="store_true", help="Also print a pitch-class histogram"
        )

    def run(self, args: argparse.Namespace) -> int:
        seq = common.load_corpus_arg(args)
        profile = RAGA_PROFILES[args.raga]
        report = validate_against_raga(seq, profile)

        common.emit(
            raga=report.raga,
            notes=report.total_notes,
            vivadi=report.vivadi_count,
            conforms=report.conforms,
        )
        if report.vivadi_positions:
            common.emit(positions=",".join(str(t) for t in report.vivadi_positions))
        if args.pretty:
            hist = pitch_class_histogram(seq)
            df = pd.DataFrame(
                {
                    "pitch_class": list(hist),
                    "swara": [SWARA_LETTERS[pc] for pc in hist],
                    "count": list(hist.values()),
                    "vivadi": [pc in profile.vivadi_pitch_classes for pc in hist],
                }
            )
            common.emit_table(df, f"Pitch classes ({profile.name})")
        return 0


class ExportCorpusCommand(Command):
    name = "export-corpus"
    help = "Write a note sequence as swara text, numeric text or sr,pitch CSV."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        common.add_corpus_args(parser)
        parser.add_argument(
            "--format",
            type=str,
            choices=EXPORT_FORMATS,
            default="swara",
            help="Output format (default: swara)",
        )
        parser.add_argument(
            "--per-line",
            type=int,
            default=20,
            help="Tokens per line for text formats; 0 for one line (default: 20)",
        )
        parser.add_argument(
            "-o", "--out", type=str, help="Output file (default: standard output)"
        )

    def run(self, args: argparse.Namespace) -> int:
        seq = common.load_corpus_arg(args)
        if args.format == "csv":
            df = pd.DataFrame({"sr": range(1, len(seq) + 1), "pitch": list(seq)})
            df.to_csv(args.out or sys.stdout, index=False, lineterminator="\n")
        else:
            text = render_sequence(seq, args.format, per_line=args.per_line) + "\n"
            if args.out:
                with open(args.out, "w") as f:
                    f.write(text)
            else:
                sys.stdout.write(text)
        if args.out:
            common.log(f"Wrote {len(seq)} notes to {args.out}")
        return 0
