"""
Subcommands for the raga model runner.

New subcommands are added by:
1. Implementing the Command interface from base.py
2. Registering the command with CommandRegistry in runner.register_all_commands
"""

from ragabench.commands.base import Command, CommandRegistry
from ragabench.commands.corpus import ExportCorpusCommand, ValidateCommand
from ragabench.commands.markov import MarkovFitCommand, MarkovGenCommand
from ragabench.commands.network import (
    PredictCommand,
    ReplayCommand,
    SweepCommand,
    TrainCommand,
)

__all__ = [
    "Command",
    "CommandRegistry",
    "TrainCommand",
    "SweepCommand",
    "ReplayCommand",
    "PredictCommand",
    "MarkovFitCommand",
    "MarkovGenCommand",
    "ValidateCommand",
    "ExportCorpusCommand",
]
