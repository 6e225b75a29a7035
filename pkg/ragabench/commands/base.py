"""
Base classes for the runner's subcommands.

This module defines the Command interface that every subcommand implements,
and the CommandRegistry the runner builds its argument parser from.
"""

import argparse
from abc import ABC, abstractmethod
from typing import Dict, Optional, Type


class Command(ABC):
    """Abstract base class for all runner subcommands.

    To add a new subcommand:
    1. Create a subclass with a `name`, a one-line `help` and the two
       abstract methods below
    2. Register it with CommandRegistry.register() in the runner

    Example:
        class CountCommand(Command):
            name = "count"
            help = "Print the number of notes in the corpus."

            @classmethod
            def add_arguments(cls, parser):
                common.add_corpus_args(parser)

            def run(self, args) -> int:
                common.emit(notes=len(common.load_corpus_arg(args)))
                return 0
    """

    name: str = ""
    help: str = ""

    @classmethod
    @abstractmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Declare this subcommand's flags on its subparser."""

    @abstractmethod
    def run(self, args: argparse.Namespace) -> int:
        """Execute the subcommand.

        Args:
            args: Parsed flags for this subcommand.

        Returns:
            Process exit status; 0 on success.

        Raises:
            RagaInputError: Bad flags or input files (exit status 2).
            NumericFailure: Training or sweeping blew up (exit status 3).
        """


class CommandRegistry:
    """Registry mapping subcommand names to Command classes.

    Usage:
        CommandRegistry.register("train", TrainCommand)
        command = CommandRegistry.create("train")
        status = command.run(args)
    """

    _commands: Dict[str, Type[Command]] = {}

    @classmethod
    def register(cls, name: str, command_class: Type[Command]) -> None:
        cls._commands[name] = command_class

    @classmethod
    def create(cls, name: str, **kwargs) -> Command:
        command_class = cls._commands.get(name)
        if not command_class:
            raise ValueError(
                f"Command {name!r} not registered. "
                f"Available commands: {cls.get_all_commands()}"
            )
        return command_class(**kwargs)

    @classmethod
    def get_all_commands(cls) -> list[str]:
        """Registered names in registration order."""
        return list(cls._commands.keys())

    @classmethod
    def get_command_class(cls, name: str) -> Optional[Type[Command]]:
        return cls._commands.get(name)
