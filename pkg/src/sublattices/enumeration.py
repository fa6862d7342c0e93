"""Streaming enumeration of all Hermite-form matrices with a given determinant."""

from __future__ import annotations

from itertools import product
from typing import Iterator

from .arith import divisor_compositions
from .forms import HnfMatrix


def hnf_stream(n: int, m: int) -> Iterator[HnfMatrix]:
    """Yield every n x n Hermite-form matrix with determinant m exactly once.

    The order is part of the contract: diagonals follow divisor_compositions(m, n)
    lexicographically, and for each diagonal the above-diagonal entries
    (h12, h13, ..., h1n, h23, ...) run through a row-major odometer with the last
    position moving fastest, each h[i][j] ranging over [0, h[j][j]).
    """
    if n < 1 or m < 1:
        raise ValueError(f"need n >= 1 and m >= 1, got n={n} m={m}")
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for diag in divisor_compositions(m, n):
        ranges = [range(diag[j]) for _, j in slots]
        for offs in product(*ranges):
            rows = [[0] * n for _ in range(n)]
            for i in range(n):
                rows[i][i] = diag[i]
            for (i, j), v in zip(slots, offs):
                rows[i][j] = v
            yield HnfMatrix(tuple(tuple(r) for r in rows))


def hnf_stream_count(n: int, m: int) -> int:
    """Cardinality of hnf_stream(n, m), measured by consuming the stream."""
    return sum(1 for _ in hnf_stream(n, m))
