import sys
import threading

import numpy as np
from tqdm import tqdm

from ragalib.errors import ConfigError

SEED_MASK = (1 << 64) - 1


def make_rng(seed: int) -> np.random.Generator:
    """The one random generator used everywhere: numpy PCG64.

    Streams are stable across platforms for a given numpy bit-generator
    version, so a seed reproduces weights and simulations exactly.
    """
    return np.random.Generator(np.random.PCG64(int(seed) & SEED_MASK))


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= SEED_MASK:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


class SharedProgress:
    """Thread-safe shared progress bar across multiple threads."""

    def __init__(self, total: int, desc: str = "Progress", disable: bool = False):
        self._pbar = tqdm(
            total=total,
            desc=desc,
            position=0,
            leave=True,
            disable=disable,
            file=sys.stderr,
        )
        self._lock = threading.Lock()

    def update(self, n: int = 1) -> None:
        with self._lock:
            self._pbar.update(n)

    def close(self) -> None:
        self._pbar.close()

    def write(self, msg: str) -> None:
        """Thread-safe write message above progress bar."""
        tqdm.write(msg, file=sys.stderr)

    def __enter__(self) -> "SharedProgress":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
