"""Swara notation codec, the embedded Bageshree corpus and raga conformance.

Pitches are integer semitone offsets from the middle-octave tonic Sa (S = 0),
covering three octaves: -12..23. In text, a bare letter is middle octave, a
single trailing apostrophe (n') lower octave and a double apostrophe (S'')
upper octave.
"""

import os
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Union

import pandas as pd

from ragalib.errors import NotationParseError, PitchRangeError

PITCH_MIN = -12
PITCH_MAX = 23

# Letter order is the chromatic order from Sa; the index is the middle-octave value.
SWARA_LETTERS = ("S", "r", "R", "g", "G", "M", "m", "P", "d", "D", "n", "N")
_LETTER_VALUE = {letter: idx for idx, letter in enumerate(SWARA_LETTERS)}

_NUMERIC_TOKEN = re.compile(r"^[+-]?\d+$")
_SWARA_TOKEN = re.compile(r"^([SrRgGMmPdDnN])('{0,2})$")

PitchValue = int


class Octave(Enum):
    LOWER = -1
    MIDDLE = 0
    UPPER = 1

    @property
    def mark(self) -> str:
        return {Octave.LOWER: "'", Octave.MIDDLE: "", Octave.UPPER: "''"}[self]


@dataclass(frozen=True)
class Swara:
    letter: str
    octave: Octave = Octave.MIDDLE

    def __post_init__(self):
        if self.letter not in _LETTER_VALUE:
            raise ValueError(f"unknown swara letter {self.letter!r}")

    def __str__(self) -> str:
        return self.letter + self.octave.mark


def check_pitch(value: int) -> int:
    if not PITCH_MIN <= value <= PITCH_MAX:
        raise PitchRangeError(value, PITCH_MIN, PITCH_MAX)
    return value


def pitch_class(value: int) -> int:
    """Mathematical modulus: -7 -> 5, never a negative class."""
    return value % 12


def encode_swara(s: Swara) -> PitchValue:
    return _LETTER_VALUE[s.letter] + 12 * s.octave.value


def decode_pitch(v: PitchValue) -> Swara:
    check_pitch(v)
    octave_offset, idx = divmod(v, 12)
    return Swara(SWARA_LETTERS[idx], Octave(octave_offset))


@dataclass(frozen=True)
class NoteSequence:
    """Ordered pitch values. Serial numbers ("time") are 1-based."""

    notes: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "notes", tuple(int(v) for v in self.notes))
        for v in self.notes:
            check_pitch(v)

    def __len__(self) -> int:
        return len(self.notes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.notes)

    def at(self, t: int) -> int:
        """Value at 1-based serial number t."""
        if not 1 <= t <= len(self.notes):
            raise IndexError(f"serial number {t} outside 1..{len(self.notes)}")
        return self.notes[t - 1]


@dataclass(frozen=True)
class RagaProfile:
    name: str
    permitted_pitch_classes: frozenset[int]
    vivadi_pitch_classes: frozenset[int]
    # Catalog metadata; documentation only.
    thaat: str = ""
    vadi: str = ""
    samvadi: str = ""
    time_of_rendition: str = ""

    def __post_init__(self):
        permitted = frozenset(self.permitted_pitch_classes)
        vivadi = frozenset(self.vivadi_pitch_classes)
        if permitted & vivadi:
            raise ValueError(
                f"{self.name}: pitch classes {sorted(permitted & vivadi)} "
                "are both permitted and vivadi"
            )
        if not (permitted | vivadi) <= set(range(12)):
            raise ValueError(f"{self.name}: pitch classes must lie in 0..11")
        object.__setattr__(self, "permitted_pitch_classes", permitted)
        object.__setattr__(self, "vivadi_pitch_classes", vivadi)


BAGESHREE = RagaProfile(
    name="bageshree",
    permitted_pitch_classes=frozenset({0, 2, 3, 5, 7, 9, 10}),  # S R g M P D n
    vivadi_pitch_classes=frozenset({1, 4, 6, 8, 11}),  # r G m d N
    thaat="Kafi",
    vadi="M (some say D)",
    samvadi="S (some say g)",
    time_of_rendition="9 PM to 12 PM",
)

RAGA_PROFILES = {BAGESHREE.name: BAGESHREE}


@dataclass(frozen=True)
class ConformanceReport:
    raga: str
    total_notes: int
    vivadi_count: int
    vivadi_positions: tuple[int, ...] = field(default_factory=tuple)

    @property
    def conforms(self) -> bool:
        return self.vivadi_count == 0


def validate_against_raga(
    seq: Union[NoteSequence, Iterable[int]], profile: RagaProfile
) -> ConformanceReport:
    notes = list(seq)
    positions = tuple(
        t
        for t, v in enumerate(notes, start=1)
        if pitch_class(v) in profile.vivadi_pitch_classes
    )
    return ConformanceReport(
        raga=profile.name,
        total_notes=len(notes),
        vivadi_count=len(positions),
        vivadi_positions=positions,
    )


def pitch_class_histogram(seq: Iterable[int]) -> dict[int, int]:
    """Occurrences per pitch class, every class 0..11 present."""
    counts = Counter(pitch_class(v) for v in seq)
    return {pc: counts.get(pc, 0) for pc in range(12)}


def parse_token(token: str, position: int = 1) -> PitchValue:
    if _NUMERIC_TOKEN.match(token):
        return check_pitch(int(token))
    m = _SWARA_TOKEN.match(token)
    if not m:
        raise NotationParseError(token, position)
    marks = len(m.group(2))
    octave = {0: Octave.MIDDLE, 1: Octave.LOWER, 2: Octave.UPPER}[marks]
    return encode_swara(Swara(m.group(1), octave))


def parse_sequence(text: str, name: str = "") -> NoteSequence:
    """Parse whitespace-separated swara or numeric tokens.

    Lines whose first non-blank character is '#' are comments. Token
    positions in error messages count tokens from 1.
    """
    tokens = []
    for line in text.splitlines():
        if line.lstrip().startswith("#"):
            continue
        tokens.extend(line.split())
    return NoteSequence(
        tuple(parse_token(tok, pos) for pos, tok in enumerate(tokens, start=1)),
        name=name,
    )


def render_sequence(seq: Iterable[int], style: str = "swara", per_line: int = 0) -> str:
    """Inverse of parse_sequence. style is "swara" or "numeric"."""
    if style == "swara":
        tokens = [str(decode_pitch(v)) for v in seq]
    elif style == "numeric":
        tokens = [str(check_pitch(int(v))) for v in seq]
    else:
        raise ValueError(f"unknown render style {style!r}")
    if per_line <= 0:
        return " ".join(tokens)
    return "\n".join(
        " ".join(tokens[i : i + per_line]) for i in range(0, len(tokens), per_line)
    )


# Bageshree note sequence, serial numbers 1..240.
BAGESHREE_CORPUS = (
    0, -2, -3, -2, 0, 5, 5, 3, 5, 9, 10, 9, 5, 10, 9, 5, 9, 10, 12, 12,  # 1-20
    10, 9, 5, 7, 9, 5, 3, 5, 3, 2, 0, -3, -2, 0, 5, 0, -2, -3, -7, -3,  # 21-40
    -2, -3, -7, -2, -3, -7, -3, -2, 0, 5, 3, 2, 0, 2, 0, -2, -3, -7, -3, 0,  # 41-60
    0, -2, -3, 0, -2, 0, 5, 3, 5, 9, 10, 9, 5, 10, 9, 5, 7, 9, 3, 5,  # 61-80
    3, 2, 0, 0, 2, 0, -2, -3, -7, -3, -2, -3, 0, 5, 3, 5, 9, 5, 9, 9,  # 81-100
    10, 9, 5, 7, 9, 3, 5, 3, 2, 0, 0, -2, 0, 5, 3, 5, 10, 9, 10, 12,  # 101-120
    14, 10, 12, 10, 9, 5, 9, 10, 9, 3, 3, 5, 5, 9, 9, 10, 9, 12, 9, 10,  # 121-140
    12, 9, 10, 9, 12, 10, 9, 5, 9, 10, 12, 10, 9, 5, 7, 9, 5, 3, 2, 0,  # 141-160
    5, 3, 5, 9, 10, 12, 14, 12, 17, 15, 14, 12, 17, 15, 14, 12, 10, 12, 14, 10,  # 161-180
    12, 10, 9, 14, 10, 9, 5, 9, 5, 10, 10, 9, 5, 9, 12, 12, 17, 15, 17, 15,  # 181-200
    14, 12, 12, 14, 10, 12, 10, 9, 12, 10, 9, 5, 9, 10, 9, 12, 9, 10, 12, 9,  # 201-220
    10, 9, 12, 10, 12, 14, 10, 12, 10, 9, 5, 7, 9, 5, 3, 2, 0, -2, -3, 0,  # 221-240
)


def load_corpus() -> NoteSequence:
    return NoteSequence(BAGESHREE_CORPUS, name="bageshree")


def _load_csv_corpus(path: Path) -> NoteSequence:
    df = pd.read_csv(path, header=None, dtype=str, comment="#", skipinitialspace=True)
    if df.shape[1] < 2:
        raise NotationParseError(path.name, 1, "expected two columns sr,pitch in")
    # Header row is optional.
    if not _NUMERIC_TOKEN.match(str(df.iloc[0, 1]).strip()):
        df = df.iloc[1:]
    notes = []
    for pos, raw in enumerate(df.iloc[:, 1], start=1):
        token = str(raw).strip()
        if not _NUMERIC_TOKEN.match(token):
            raise NotationParseError(token, pos, "non-integer pitch")
        notes.append(check_pitch(int(token)))
    return NoteSequence(tuple(notes), name=path.stem)


def load_corpus_file(path: Union[str, os.PathLike]) -> NoteSequence:
    """Load a corpus from plain text (token grammar) or a `sr,pitch` CSV."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Corpus file not found: {path}")
    try:
        if path.suffix.lower() == ".csv":
            return _load_csv_corpus(path)
        text = path.read_text(encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise NotationParseError(path.name, 1, "empty CSV corpus") from None
    except pd.errors.ParserError as e:
        raise NotationParseError(path.name, 1, f"malformed CSV corpus ({e}):") from e
    except UnicodeDecodeError as e:
        raise NotationParseError(
            path.name, 1, f"undecodable byte at offset {e.start} in"
        ) from e
    return parse_sequence(text, name=path.stem)
