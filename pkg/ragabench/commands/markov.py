"""Subcommands for the transition-matrix baseline: markov-fit, markov-gen."""

import argparse

import pandas as pd

from ragabench.commands import common
from ragabench.commands.base import Command
from ragalib.markov import (
    estimate_transitions,
    read_matrix_csv,
    simulate,
    stationary_check,
    write_matrix_csv,
)
from ragalib.notation import RAGA_PROFILES, parse_token, render_sequence, validate_against_raga


class MarkovFitCommand(Command):
    name = "markov-fit"
    help = "Estimate a first-order transition matrix from a note sequence."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        common.add_corpus_args(parser)
        parser.add_argument(
            "-o", "--out", type=str, required=True, help="Write the matrix CSV here"
        )
        parser.add_argument(
            "--pretty", action="store_true", help="Also print the probability matrix"
        )

    def run(self, args: argparse.Namespace) -> int:
        seq = common.load_corpus_arg(args)
        tm = estimate_transitions(seq)
        write_matrix_csv(tm, args.out)
        common.log(f"Wrote {len(tm)}x{len(tm)} matrix to {args.out}")
        if tm.absorbing:
            common.log(f"Absorbing states given a self-loop: {list(tm.absorbing)}")

        common.emit(
            states=len(tm),
            transitions=int(tm.counts.sum()),
            absorbing=len(tm.absorbing),
        )
        if args.pretty:
            df = pd.DataFrame(tm.probs, columns=list(tm.alphabet))
            df.insert(0, "state", list(tm.alphabet))
            common.emit_table(df, "Transition probabilities")
        return 0


class MarkovGenCommand(Command):
    name = "markov-gen"
    help = "Simulate a note sequence from a transition matrix."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        common.add_corpus_args(parser)
        parser.add_argument(
            "--matrix",
            type=str,
            help="Simulate from a matrix CSV written by markov-fit instead of a corpus",
        )
        parser.add_argument(
            "--start",
            type=str,
            required=True,
            help="First note, as a pitch number or a swara token (e.g. 0, S, n')",
        )
        parser.add_argument(
            "--length", type=int, default=240, help="Notes to generate (default: 240)"
        )
        common.add_seed_arg(parser)
        common.add_raga_arg(parser)
        parser.add_argument(
            "-o", "--out", type=str, help="Write the sequence as swara text here"
        )
        parser.add_argument(
            "--csv", type=str, help="Write the sequence as sr,pitch CSV here"
        )

    def run(self, args: argparse.Namespace) -> int:
        if args.matrix:
            tm = read_matrix_csv(args.matrix)
        else:
            tm = estimate_transitions(common.load_corpus_arg(args))
        start = parse_token(args.start.strip())
        seed = common.resolve_seed(args)
        seq = simulate(tm, start, args.length, seed)

        if args.out:
            with open(args.out, "w") as f:
                f.write(render_sequence(seq, "swara", per_line=20) + "\n")
            common.log(f"Wrote {len(seq)} notes to {args.out}")
        if args.csv:
            df = pd.DataFrame({"sr": range(1, len(seq) + 1), "pitch": list(seq)})
            df.to_csv(args.csv, index=False, lineterminator="\n")
            common.log(f"Wrote {len(seq)} notes to {args.csv}")

        report = validate_against_raga(seq, RAGA_PROFILES[args.raga])
        common.emit(
            length=len(seq),
            seed=seed,
            vivadi=report.vivadi_count,
            conforms=report.conforms,
        )
        if len(seq) > 1:
            fit = stationary_check(tm, seq)
            common.emit(max_l1=fit.max_l1, worst_state=fit.worst_state)
        return 0
