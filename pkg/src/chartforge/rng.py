"""Counter-based deterministic random number generation.

Every draw is ``BLAKE2b-64(key, counter)`` where the key is derived from a
64-bit seed plus an optional stream label, and the counter increments by one
per draw. BLAKE2b is specified in RFC 7693, so the exact bit stream can be
reproduced in any language. There is no hidden state beyond the counter:
a generator is a pure function of (seed, label, number of draws so far).
"""

from __future__ import annotations

import hashlib
import math
from typing import Sequence, TypeVar

MASK64 = (1 << 64) - 1

T = TypeVar("T")


def _derive_key(seed: int, label: str) -> bytes:
    h = hashlib.blake2b(digest_size=32)
    h.update((seed & MASK64).to_bytes(8, "little"))
    h.update(label.encode("utf-8"))
    return h.digest()


def hash64(seed: int, *parts: int | str) -> int:
    """One-shot 64-bit hash of a seed plus mixed int/str parts.

    Used for per-record seed derivation: ``hash64(base_seed, i)`` gives
    record i's seed, so any subset of a run can be regenerated on its own.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update((seed & MASK64).to_bytes(8, "little"))
    for part in parts:
        if isinstance(part, int):
            h.update(b"i")
            h.update((part & MASK64).to_bytes(8, "little"))
        else:
            h.update(b"s")
            h.update(part.encode("utf-8"))
    return int.from_bytes(h.digest(), "little")


class CounterRng:
    """Deterministic stream of draws keyed by (seed, label).

    ``child(label)`` derives an independent stream whose output does not
    depend on how much of the parent has been consumed, which keeps
    generation stages decoupled: inserting a draw in one stage never shifts
    the values another stage sees.
    """

    def __init__(self, seed: int, label: str = "") -> None:
        self.seed = seed & MASK64
        self.label = label
        self._key = _derive_key(seed, label)
        self._counter = 0

    def child(self, label: str) -> "CounterRng":
        sub = CounterRng.__new__(CounterRng)
        sub.seed = self.seed
        sub.label = f"{self.label}/{label}"
        sub._key = hashlib.blake2b(
            self._key + label.encode("utf-8"), digest_size=32
        ).digest()
        sub._counter = 0
        return sub

    def next_u64(self) -> int:
        h = hashlib.blake2b(digest_size=8, key=self._key)
        h.update(self._counter.to_bytes(8, "little"))
        self._counter += 1
        return int.from_bytes(h.digest(), "little")

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) without modulo bias (rejection)."""
        if n <= 0:
            raise ValueError("randrange() arg must be positive")
        span = MASK64 + 1
        limit = span - span % n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, a: int, b: int) -> int:
        """Uniform integer in [a, b] inclusive."""
        if b < a:
            raise ValueError("empty range")
        return a + self.randrange(b - a + 1)

    def uniform(self, a: float, b: float) -> float:
        return a + (b - a) * self.random()

    def log_uniform(self, a: float, b: float) -> float:
        """Draw whose logarithm is uniform on [log a, log b]; a, b > 0."""
        return math.exp(self.uniform(math.log(a), math.log(b)))

    def choice(self, seq: Sequence[T]) -> T:
        if not seq:
            raise IndexError("choice from empty sequence")
        return seq[self.randrange(len(seq))]

    def weighted_choice(self, seq: Sequence[T], weights: Sequence[float]) -> T:
        if len(seq) != len(weights) or not seq:
            raise ValueError("weights must match a non-empty sequence")
        total = float(sum(weights))
        if total <= 0.0:
            raise ValueError("weights must sum to a positive value")
        r = self.random() * total
        acc = 0.0
        for item, w in zip(seq, weights):
            if w < 0:
                raise ValueError("negative weight")
            acc += w
            if r < acc:
                return item
        return seq[-1]  # guard against float accumulation at the top edge

    def sample(self, seq: Sequence[T], k: int) -> list[T]:
        """k distinct elements, order randomized (partial Fisher-Yates)."""
        if k > len(seq):
            raise ValueError("sample larger than population")
        pool = list(seq)
        for i in range(k):
            j = self.randint(i, len(pool) - 1)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def shuffle(self, items: list[T]) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]
