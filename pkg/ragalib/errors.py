"""Exception types raised by ragalib.

Two families, so callers (the CLI in particular) can tell a bad input from a
numeric failure without string matching:

- RagaInputError (a ValueError): the caller handed us something unusable.
- NumericFailure (a RuntimeError): the inputs were fine but the numbers
  blew up (non-finite loss, every sweep cell diverged).
"""

from typing import Optional


class RagaInputError(ValueError):
    """Base class for usage and input errors."""


class ConfigError(RagaInputError):
    """A configuration value is outside its permitted range."""


class PitchRangeError(RagaInputError):
    def __init__(self, value: int, lo: int, hi: int):
        super().__init__(f"pitch value {value} outside [{lo}, {hi}]")
        self.value = value


class NotationParseError(RagaInputError):
    def __init__(self, token: str, position: int, reason: str = "unknown token"):
        super().__init__(f"{reason} {token!r} at position {position}")
        self.token = token
        self.position = position


class InsufficientDataError(RagaInputError):
    pass


class DegenerateScaleError(RagaInputError):
    pass


class SplitError(RagaInputError):
    pass


class ShapeError(RagaInputError):
    pass


class EmptyDataError(RagaInputError):
    pass


class UnknownStateError(RagaInputError):
    def __init__(self, state):
        super().__init__(f"state {state!r} is not in the transition alphabet")
        self.state = state


class ModelFormatError(RagaInputError):
    pass


class GridError(RagaInputError):
    pass


class NumericFailure(RuntimeError):
    """Base class for numeric failures."""


class DivergenceError(NumericFailure):
    def __init__(self, epoch: int, eta: float, seed: Optional[int] = None):
        msg = f"non-finite loss at epoch {epoch} (eta={eta})"
        if seed is not None:
            msg += f", seed {seed}"
        super().__init__(msg)
        self.epoch = epoch
        self.eta = eta
        self.seed = seed


class SweepError(NumericFailure):
    pass
