"""First-order transition-matrix baseline for raga sequence generation.

States are the distinct pitch values of a training sequence in ascending
order. A state seen only as the final note has no outgoing pairs; it gets a
self-loop of probability 1 and is listed in `absorbing`, so a simulation
never stalls.
"""

import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np
import pandas as pd

from ragalib.errors import (
    ConfigError,
    InsufficientDataError,
    ModelFormatError,
    ShapeError,
    UnknownStateError,
)
from ragalib.notation import NoteSequence
from ragalib.util import make_rng


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    alphabet: tuple[int, ...]
    probs: np.ndarray  # (k, k), rows in alphabet order
    # None when the matrix was read back from CSV.
    counts: Optional[np.ndarray] = None
    absorbing: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        alphabet = tuple(int(v) for v in self.alphabet)
        if list(alphabet) != sorted(set(alphabet)):
            raise ShapeError("alphabet must be strictly increasing")
        probs = np.array(self.probs, dtype=float)
        k = len(alphabet)
        if probs.shape != (k, k):
            raise ShapeError(f"probs of shape {probs.shape} do not match {k} states")
        probs.flags.writeable = False
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "probs", probs)
        if self.counts is not None:
            counts = np.array(self.counts, dtype=np.int64)
            if counts.shape != (k, k):
                raise ShapeError(f"counts of shape {counts.shape} do not match {k} states")
            counts.flags.writeable = False
            object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "absorbing", tuple(int(v) for v in self.absorbing))

    def __len__(self) -> int:
        return len(self.alphabet)

    def index_of(self, state: int) -> int:
        try:
            return self.alphabet.index(int(state))
        except ValueError:
            raise UnknownStateError(state) from None

    def row(self, state: int) -> dict[int, float]:
        """Successor distribution of one state, zero entries omitted."""
        probs = self.probs[self.index_of(state)]
        return {b: float(pr) for b, pr in zip(self.alphabet, probs) if pr > 0}


def _count_pairs(notes: list[int], alphabet: tuple[int, ...]) -> np.ndarray:
    index = {v: i for i, v in enumerate(alphabet)}
    counts = np.zeros((len(alphabet), len(alphabet)), dtype=np.int64)
    for a, b in zip(notes, notes[1:]):
        counts[index[a], index[b]] += 1
    return counts


def estimate_transitions(seq: Union[NoteSequence, Iterable[int]]) -> TransitionMatrix:
    notes = [int(v) for v in seq]
    if len(notes) < 2:
        raise InsufficientDataError(
            f"need at least 2 notes to count transitions, got {len(notes)}"
        )
    alphabet = tuple(sorted(set(notes)))
    counts = _count_pairs(notes, alphabet)

    totals = counts.sum(axis=1)
    probs = np.zeros(counts.shape, dtype=float)
    seen = totals > 0
    probs[seen] = counts[seen] / totals[seen, None]
    absorbing = []
    for i in np.flatnonzero(~seen):
        probs[i, i] = 1.0
        absorbing.append(alphabet[i])
    return TransitionMatrix(alphabet, probs, counts, tuple(absorbing))


def sampling_cdf(probs: np.ndarray) -> np.ndarray:
    """Row-wise cumulative probabilities for inverse-CDF sampling.

    Each row is pinned to exactly 1.0 from its last positive entry on, so a
    uniform in [0, 1) always lands on a state with nonzero probability even
    when rounding leaves the row sum just below 1.
    """
    probs = np.asarray(probs, dtype=float)
    cdf = np.cumsum(probs, axis=1)
    for i, row in enumerate(probs):
        positive = np.flatnonzero(row > 0)
        if positive.size:
            cdf[i, positive[-1]:] = 1.0
    return cdf


def simulate(
    tm: TransitionMatrix, start: int, length: int, seed: int
) -> NoteSequence:
    """Walk the chain from `start` for `length` notes (start included).

    Each successor is chosen by inverse CDF over the current row in alphabet
    order; the length-1 uniforms come from the pinned generator up front.
    """
    if length < 1:
        raise ConfigError(f"length must be >= 1, got {length}")
    state = tm.index_of(start)
    cdf = sampling_cdf(tm.probs)
    uniforms = make_rng(seed).random(length - 1)

    path = [state]
    for u in uniforms:
        state = int(np.searchsorted(cdf[state], u, side="right"))
        path.append(state)
    return NoteSequence(
        tuple(tm.alphabet[i] for i in path), name=f"markov-seed{seed}"
    )


@dataclass(frozen=True)
class StationaryReport:
    # L1 distance per state that has at least one successor in the sample.
    per_state: dict[int, float]
    transitions: int

    @property
    def max_l1(self) -> float:
        return max(self.per_state.values()) if self.per_state else 0.0

    @property
    def worst_state(self) -> Optional[int]:
        if not self.per_state:
            return None
        return max(self.per_state, key=lambda s: (self.per_state[s], -s))


def stationary_check(
    tm: TransitionMatrix, sample: Union[NoteSequence, Iterable[int]]
) -> StationaryReport:
    """Compare the sample's empirical successor frequencies with tm's rows."""
    notes = [int(v) for v in sample]
    if len(notes) < 2:
        raise InsufficientDataError(
            f"need at least 2 notes to count transitions, got {len(notes)}"
        )
    for v in set(notes):
        tm.index_of(v)
    counts = _count_pairs(notes, tm.alphabet)
    totals = counts.sum(axis=1)

    per_state = {}
    for i in np.flatnonzero(totals > 0):
        empirical = counts[i] / totals[i]
        per_state[tm.alphabet[i]] = float(np.abs(empirical - tm.probs[i]).sum())
    return StationaryReport(per_state=per_state, transitions=len(notes) - 1)


def write_matrix_csv(tm: TransitionMatrix, path: Union[str, os.PathLike]) -> None:
    """Header `state,<alphabet...>`; one row per state, 6 significant digits."""
    df = pd.DataFrame(tm.probs, columns=[str(v) for v in tm.alphabet])
    df.insert(0, "state", list(tm.alphabet))
    df.to_csv(path, index=False, float_format="%.6g", lineterminator="\n")


def read_matrix_csv(path: Union[str, os.PathLike]) -> TransitionMatrix:
    if not os.path.exists(path):
        raise FileNotFoundError(f"Matrix file not found: {path}")
    try:
        df = pd.read_csv(path)
        alphabet = [int(c) for c in df.columns[1:]]
        states = [int(v) for v in df.iloc[:, 0]]
        probs = df.iloc[:, 1:].to_numpy(dtype=float)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as e:
        raise ModelFormatError(f"{path}: not a transition matrix ({e})") from e
    if states != alphabet:
        raise ModelFormatError(f"{path}: row states do not match the header")
    if np.any(probs < 0) or not np.all(np.isfinite(probs)):
        raise ModelFormatError(f"{path}: probabilities must be finite and >= 0")
    totals = probs.sum(axis=1)
    if np.any(np.abs(totals - 1.0) > 1e-4):
        raise ModelFormatError(f"{path}: rows must sum to 1")
    # Undo the rounding of the 6-digit export.
    return TransitionMatrix(tuple(alphabet), probs / totals[:, None])
