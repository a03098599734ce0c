"""Seeded random number generator for reproducible runs."""

import random
from typing import List, Sequence, TypeVar

T = TypeVar("T")


class SeededRNG:
    """Wrapper around random.Random; every draw in a run goes through one."""

    def __init__(self, seed: int):
        self._rng = random.Random(seed)

    def bernoulli(self, p: float) -> int:
        """1 with probability p, else 0."""
        return 1 if self._rng.random() < p else 0

    def choice(self, seq: Sequence[T]) -> T:
        return self._rng.choice(seq)

    def sample(self, seq: Sequence[T], k: int) -> List[T]:
        return self._rng.sample(list(seq), k)

    def shuffle(self, seq: List[T]) -> None:
        self._rng.shuffle(seq)

    def fork(self) -> "SeededRNG":
        """Create a child RNG with a derived seed for sub-tasks."""
        return SeededRNG(self._rng.randint(0, 2**63 - 1))
