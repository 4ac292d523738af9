"""Exact sample laws for the four schemes and random sample generation."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from urnlab.combinatorics import (
    enumerate_sequences,
    enumerate_simplex,
    falling_factorial,
    falling_factorial_vec,
    multinomial,
    multiplicity_vector,
    power_vec,
)
from urnlab.errors import InsufficientBallsError, InvalidArgumentError
from urnlab.model import Scheme

Vector = tuple[int, ...]


def rng_stream(seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator for substream ``index`` of a 64-bit ``seed``.

    The derivation is deterministic, so the same ``(seed, index)`` always
    reproduces the same draws.
    """
    if not 0 <= seed < 2**64:
        raise InvalidArgumentError("seed must fit in 64 unsigned bits")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


@dataclass(frozen=True)
class SampleLaw:
    scheme: Scheme
    composition: Vector
    m: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "composition", tuple(int(c) for c in self.composition))
        if any(c < 0 for c in self.composition):
            raise InvalidArgumentError("composition must be nonnegative")
        need = 1 if self.scheme.with_replacement else self.m
        if self.total < need:
            raise InsufficientBallsError(
                f"scheme {self.scheme} needs at least {need} balls, urn has {self.total}"
            )

    @property
    def total(self) -> int:
        return sum(self.composition)

    @property
    def r(self) -> int:
        return len(self.composition)


def prob_unordered(law: SampleLaw, k: Sequence[int]) -> Fraction:
    """Probability of the unordered sample with color counts ``k``.

    Multivariate hypergeometric under ``M``, multinomial under ``R``.
    """
    if law.scheme.ordered:
        raise InvalidArgumentError("prob_unordered needs scheme M or R")
    c, T, m = law.composition, law.total, law.m
    if len(k) != len(c) or sum(k) != m or any(ki < 0 for ki in k):
        raise InvalidArgumentError(f"{tuple(k)} is not a sample of size {m} over {len(c)} colors")
    if law.scheme is Scheme.M:
        num = 1
        for ci, ki in zip(c, k):
            num *= math.comb(ci, ki)
        return Fraction(num, math.comb(T, m))
    return Fraction(multinomial(m, k) * power_vec(c, k), T**m)


def prob_ordered(law: SampleLaw, d: Sequence[int]) -> Fraction:
    """Probability of drawing the exact sequence ``d`` (1-based colors)."""
    if not law.scheme.ordered:
        raise InvalidArgumentError("prob_ordered needs scheme MSEQ or RSEQ")
    if len(d) != law.m:
        raise InvalidArgumentError(f"sequence length {len(d)} != sample size {law.m}")
    j = multiplicity_vector(d, law.r)
    if law.scheme is Scheme.MSEQ:
        return Fraction(falling_factorial_vec(law.composition, j), falling_factorial(law.total, law.m))
    return Fraction(power_vec(law.composition, j), law.total**law.m)


def unordered_law(law: SampleLaw) -> dict[Vector, Fraction]:
    """Full law over the simplex, zero-probability points dropped."""
    out = {}
    for k in enumerate_simplex(law.r, law.m):
        p = prob_unordered(law, k)
        if p:
            out[k] = p
    return out


def ordered_law(law: SampleLaw) -> dict[Vector, Fraction]:
    out = {}
    for d in enumerate_sequences(law.r, law.m):
        p = prob_ordered(law, d)
        if p:
            out[d] = p
    return out


def draw_colors(counts: np.ndarray, m: int, replace: bool, rng: np.random.Generator) -> np.ndarray:
    """Draw ``m`` balls one at a time from each row of ``counts``.

    Returns an ``(paths, m)`` array of 0-based colors in draw order.
    Without replacement each drawn ball is set aside until the sample is
    complete.
    """
    work = np.array(counts, dtype=np.int64, copy=True)
    paths, _ = work.shape
    rows = np.arange(paths)
    out = np.empty((paths, m), dtype=np.int64)
    for t in range(m):
        totals = work.sum(axis=1)
        if np.any(totals <= 0):
            raise InsufficientBallsError("urn ran out of balls while sampling")
        u = rng.integers(0, totals)
        color = (np.cumsum(work, axis=1) <= u[:, None]).sum(axis=1)
        out[:, t] = color
        if not replace:
            work[rows, color] -= 1
    return out


def draw_sample(law: SampleLaw, rng: np.random.Generator) -> Vector:
    """One random sample: a simplex point for ``M``/``R``, a 1-based sequence otherwise."""
    colors = draw_colors(np.array([law.composition]), law.m, law.scheme.with_replacement, rng)[0]
    if law.scheme.ordered:
        return tuple(int(c) + 1 for c in colors)
    return tuple(int(x) for x in np.bincount(colors, minlength=law.r))
