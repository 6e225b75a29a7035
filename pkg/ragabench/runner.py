"""Command-line entry point: `python -m ragabench.runner <command> [flags]`.

Exit status is 0 on success, 2 for usage and input errors, 3 for numeric
failures (divergence, an all-diverged sweep).
"""

import argparse
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

from ragabench.commands import (
    CommandRegistry,
    ExportCorpusCommand,
    MarkovFitCommand,
    MarkovGenCommand,
    PredictCommand,
    ReplayCommand,
    SweepCommand,
    TrainCommand,
    ValidateCommand,
)
from ragalib.errors import NumericFailure, RagaInputError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def register_all_commands() -> None:
    """Register all available subcommands with the registry."""
    # Network
    CommandRegistry.register(TrainCommand.name, TrainCommand)
    CommandRegistry.register(SweepCommand.name, SweepCommand)
    CommandRegistry.register(ReplayCommand.name, ReplayCommand)
    CommandRegistry.register(PredictCommand.name, PredictCommand)

    # Markov baseline
    CommandRegistry.register(MarkovFitCommand.name, MarkovFitCommand)
    CommandRegistry.register(MarkovGenCommand.name, MarkovGenCommand)

    # Corpus
    CommandRegistry.register(ValidateCommand.name, ValidateCommand)
    CommandRegistry.register(ExportCorpusCommand.name, ExportCorpusCommand)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="raga",
        description="Autoregressive network and Markov models of raga note sequences.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in CommandRegistry.get_all_commands():
        command_class = CommandRegistry.get_command_class(name)
        sub = subparsers.add_parser(
            name, help=command_class.help, description=command_class.help
        )
        command_class.add_arguments(sub)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    register_all_commands()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad flags and 0 on --help.
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    command = CommandRegistry.create(args.command)
    try:
        return command.run(args)
    except (RagaInputError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NumericFailure as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
