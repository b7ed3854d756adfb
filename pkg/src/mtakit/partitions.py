"""Integer partitions and the words they index."""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import factorial, prod

Partition = tuple[int, ...]  # weakly decreasing positive parts


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of n, lexicographically increasing as tuples of parts.

    For n = 2 this is ((1, 1), (2,)).
    """
    if n < 0:
        raise ValueError("n must be non-negative")

    def gen(remaining: int, largest: int):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in gen(remaining - first, first):
                yield (first,) + rest

    return tuple(sorted(gen(n, n)))


def partition_count(n: int) -> int:
    return len(partitions(n))


def creation_word(r: Partition) -> tuple[int, ...]:
    """H_{-r1} ... H_{-rk} as a canonical index tuple."""
    return tuple(-p for p in r)


def annihilation_word(s: Partition) -> tuple[int, ...]:
    """H_{sk} ... H_{s1} as a canonical index tuple."""
    return tuple(reversed(s))


def partition_of_word(word: tuple[int, ...]) -> Partition:
    """Inverse of creation_word / annihilation_word for pure words."""
    return tuple(sorted((abs(n) for n in word), reverse=True))


def norm_coefficient(r: Partition) -> int:
    """prod of the parts times prod of the factorials of part multiplicities."""
    return prod(r) * prod(factorial(m) for m in Counter(r).values())
