"""Small enumeration helpers shared by the engines and the verification
suites."""

from __future__ import annotations

from math import factorial
from typing import Iterator


def partitions(n: int, max_part: int | None = None, max_parts: int | None = None) -> Iterator[tuple]:
    """Yield partitions of ``n`` into positive parts, non-increasing order.

    ``partitions(0)`` yields the empty partition.
    """
    if n < 0:
        return
    if n == 0:
        yield ()
        return
    if max_parts is not None and max_parts <= 0:
        return
    top = n if max_part is None else min(n, max_part)
    for first in range(top, 0, -1):
        rest_parts = None if max_parts is None else max_parts - 1
        for rest in partitions(n - first, first, rest_parts):
            yield (first,) + rest


def compositions_into_parts(n: int, parts: int, min_part: int = 0) -> Iterator[tuple]:
    """Yield non-increasing tuples of length ``parts`` with entries
    ``>= min_part`` summing to ``n``."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    if n < parts * min_part:
        return
    for partition in partitions(n - parts * min_part, max_parts=parts):
        padded = tuple(x + min_part for x in partition) + (min_part,) * (parts - len(partition))
        yield padded


def multiset_norm(values) -> int:
    """``prod_v m_v!`` over the multiplicities of the multiset entries."""
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    out = 1
    for c in counts.values():
        out *= factorial(c)
    return out


def exponent_norm(pairs) -> int:
    """``prod mu_i!`` over (index, multiplicity) pairs."""
    out = 1
    for _, m in pairs:
        out *= factorial(m)
    return out
