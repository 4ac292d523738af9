"""Index spaces of unordered and ordered samples plus exact counting helpers.

Simplex points ``k`` are tuples of per-color counts summing to the sample
size ``m``.  Draw sequences ``d`` are tuples of 1-based color indices of
length ``m``.  Rationals are :class:`fractions.Fraction` throughout.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache

from urnlab.errors import InvalidArgumentError, InvalidDimensionError

__all__ = [
    "Fraction",
    "enumerate_simplex",
    "enumerate_sequences",
    "multiplicity_vector",
    "multinomial",
    "falling_factorial",
    "falling_factorial_vec",
    "power_vec",
    "simplex_size",
    "sequence_rank",
    "binom_shift",
]


def _check_dims(r: int, m: int) -> None:
    if r < 2 or m < 1:
        raise InvalidDimensionError(f"need r >= 2 and m >= 1, got r={r}, m={m}")


def simplex_size(r: int, m: int) -> int:
    return math.comb(r + m - 1, m)


@lru_cache(maxsize=None)
def _simplex(r: int, m: int) -> tuple[tuple[int, ...], ...]:
    if r == 1:
        return ((m,),)
    out = []
    for first in range(m, -1, -1):
        for rest in _simplex(r - 1, m - first):
            out.append((first, *rest))
    return tuple(out)


def enumerate_simplex(r: int, m: int) -> list[tuple[int, ...]]:
    """All count vectors of an unordered sample of size ``m`` over ``r`` colors.

    The order is lexicographically decreasing, so ``(m, 0, ..., 0)`` comes
    first and ``(0, ..., 0, m)`` last.
    """
    _check_dims(r, m)
    return list(_simplex(r, m))


def enumerate_sequences(r: int, m: int) -> list[tuple[int, ...]]:
    """All ``r**m`` ordered samples, lexicographic in the digit string."""
    _check_dims(r, m)
    return list(itertools.product(range(1, r + 1), repeat=m))


def sequence_rank(d: Sequence[int], r: int) -> int:
    """Position of ``d`` in :func:`enumerate_sequences` order."""
    idx = 0
    for digit in d:
        idx = idx * r + (digit - 1)
    return idx


def multiplicity_vector(d: Sequence[int], r: int) -> tuple[int, ...]:
    counts = [0] * r
    for digit in d:
        if not 1 <= digit <= r:
            raise InvalidArgumentError(f"color index {digit} outside 1..{r}")
        counts[digit - 1] += 1
    return tuple(counts)


def multinomial(m: int, k: Sequence[int]) -> int:
    """``m! / (k_1! ... k_r!)``."""
    if sum(k) != m or any(ki < 0 for ki in k):
        raise InvalidArgumentError(f"{tuple(k)} is not a composition of {m}")
    out = 1
    left = m
    for ki in k:
        out *= math.comb(left, ki)
        left -= ki
    return out


def binom_shift(m: int, k: Sequence[int], i: int) -> int:
    """Multinomial ``C(m-1; k - e_i)``, zero when ``k_i == 0``."""
    if k[i] == 0:
        return 0
    shifted = list(k)
    shifted[i] -= 1
    return multinomial(m - 1, shifted)


def falling_factorial(x: int, j: int) -> int:
    if j < 0:
        raise InvalidArgumentError("falling factorial order must be >= 0")
    out = 1
    for t in range(j):
        out *= x - t
    return out


def falling_factorial_vec(x: Sequence[int], k: Sequence[int]) -> int:
    out = 1
    for xi, ki in zip(x, k):
        out *= falling_factorial(xi, ki)
    return out


def power_vec(x: Sequence[int], k: Sequence[int]) -> int:
    out = 1
    for xi, ki in zip(x, k):
        out *= xi**ki
    return out
