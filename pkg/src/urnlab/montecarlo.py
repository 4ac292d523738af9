"""Monte Carlo simulation of urn paths.

Paths are simulated in fixed blocks of :data:`BLOCK` paths, vectorized
across the block.  Block ``b`` always uses ``rng_stream(seed, b)``, so the
summary is bit-identical for any number of workers.  Per-step sums of
``X`` and ``X^T X`` are accumulated as exact integers and merged by block
index.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from urnlab.combinatorics import sequence_rank
from urnlab.errors import InvalidArgumentError, TenabilityError, TenabilityViolation
from urnlab.model import UrnModel, check_tenability
from urnlab.sampling import draw_colors, rng_stream

BLOCK = 4096
_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class _Tables:
    """Lookup from drawn colors to addition vectors."""

    rows: np.ndarray
    ordered: bool
    replace: bool
    r: int
    m: int

    @classmethod
    def build(cls, model: UrnModel) -> _Tables:
        r, m = model.r, model.m
        if model.scheme.ordered:
            rows = np.zeros((r**m, r), dtype=np.int64)
            for d, add in model.matrix.rows.items():
                rows[sequence_rank(d, r)] = add
        else:
            if (m + 1) ** r > 10**7:
                raise InvalidArgumentError("unordered lookup table too large for this (r, m)")
            rows = np.zeros(((m + 1) ** r, r), dtype=np.int64)
            for k, add in model.matrix.rows.items():
                rows[sum(ki * (m + 1) ** i for i, ki in enumerate(k))] = add
        return cls(rows, model.scheme.ordered, model.scheme.with_replacement, r, m)

    def increments(self, colors: np.ndarray) -> np.ndarray:
        if self.ordered:
            code = np.zeros(colors.shape[0], dtype=np.int64)
            for t in range(self.m):
                code = code * self.r + colors[:, t]
        else:
            counts = (colors[:, :, None] == np.arange(self.r)).sum(axis=1)
            code = counts @ ((self.m + 1) ** np.arange(self.r, dtype=np.int64))
        return self.rows[code]


def _check_runnable(model: UrnModel, n: int) -> None:
    report = check_tenability(model.matrix)
    if not report.tenable:
        raise TenabilityError(f"refusing to simulate a non-tenable model; rows {report.violations[:5]}")
    if n < 0:
        raise InvalidArgumentError("steps must be >= 0")
    if model.total(n) ** 2 * BLOCK > _INT64_MAX:
        raise OverflowError("counts would overflow 64-bit accumulators")


def _simulate_block(model: UrnModel, tables: _Tables, n: int, paths: int, rng: np.random.Generator, record: bool = False):
    X = np.tile(np.array(model.initial, dtype=np.int64), (paths, 1))
    sigma, T0 = model.sigma, model.T0
    r = model.r
    sums = np.zeros((n + 1, r), dtype=np.int64)
    squares = np.zeros((n + 1, r, r), dtype=np.int64)
    lo = np.zeros((n + 1, r), dtype=np.int64)
    hi = np.zeros((n + 1, r), dtype=np.int64)
    trace = [X[0].copy()] if record else None

    def accumulate(j: int) -> None:
        sums[j] = X.sum(axis=0)
        squares[j] = X.T @ X
        lo[j] = X.min(axis=0)
        hi[j] = X.max(axis=0)

    accumulate(0)
    for j in range(1, n + 1):
        colors = draw_colors(X, tables.m, tables.replace, rng)
        X += tables.increments(colors)
        if X.min() < 0:
            raise TenabilityViolation(f"negative ball count at step {j}")
        if np.any(X.sum(axis=1) != j * sigma + T0):
            raise TenabilityViolation(f"total ball count drifted at step {j}")
        accumulate(j)
        if record:
            trace.append(X[0].copy())
    return sums, squares, lo, hi, trace


def run_path(model: UrnModel, n: int, rng: np.random.Generator) -> list[tuple[int, ...]]:
    """One path ``X_0, ..., X_n``."""
    _check_runnable(model, n)
    *_, trace = _simulate_block(model, _Tables.build(model), n, 1, rng, record=True)
    return [tuple(int(v) for v in x) for x in trace]


@dataclass
class SimulationPlan:
    model: UrnModel
    steps: int
    runs: int
    seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if self.runs < 1:
            raise InvalidArgumentError("runs must be >= 1")
        if self.steps < 0:
            raise InvalidArgumentError("steps must be >= 0")
        if self.workers < 1:
            raise InvalidArgumentError("workers must be >= 1")


@dataclass
class SimulationSummary:
    steps: int
    runs: int
    seed: int
    workers: int = field(compare=False)
    sums: list[list[int]]
    squares: list[list[list[int]]]
    minimum: list[list[int]]
    maximum: list[list[int]]
    elapsed: float = field(default=0.0, compare=False)

    def exact_mean(self, step: int = -1) -> list[Fraction]:
        return [Fraction(s, self.runs) for s in self.sums[step]]

    def mean(self, step: int = -1) -> list[float]:
        return [float(x) for x in self.exact_mean(step)]

    def exact_cov(self, step: int = -1) -> list[list[Fraction]]:
        """Unbiased sample covariance (zero for a single run)."""
        R = self.runs
        s, S = self.sums[step], self.squares[step]
        r = len(s)
        if R == 1:
            return [[Fraction(0)] * r for _ in range(r)]
        return [[(S[i][j] - Fraction(s[i] * s[j], R)) / (R - 1) for j in range(r)] for i in range(r)]

    def cov(self, step: int = -1) -> list[list[float]]:
        return [[float(x) for x in row] for row in self.exact_cov(step)]

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "steps": self.steps,
            "runs": self.runs,
            "seed": self.seed,
            "mean": self.mean(),
            "cov": self.cov(),
            "min": self.minimum[-1],
            "max": self.maximum[-1],
        }
        if timing:
            out["wall_ms"] = round(self.elapsed * 1000.0, 3)
        return out


def _blocks(runs: int) -> list[tuple[int, int]]:
    return [(b, min(BLOCK, runs - b * BLOCK)) for b in range(math.ceil(runs / BLOCK))]


def _worker(model: UrnModel, n: int, seed: int, blocks: list[tuple[int, int]]):
    tables = _Tables.build(model)
    out = []
    for b, paths in blocks:
        sums, squares, lo, hi, _ = _simulate_block(model, tables, n, paths, rng_stream(seed, b))
        out.append((b, sums.tolist(), squares.tolist(), lo.tolist(), hi.tolist()))
    return out


def run_ensemble(plan: SimulationPlan) -> SimulationSummary:
    """Aggregate ``plan.runs`` independent paths.

    Block ``b`` goes to worker ``b % workers``; results are merged in block
    order, so the summary does not depend on scheduling or worker count.
    """
    model, n = plan.model, plan.steps
    _check_runnable(model, n)
    start = time.perf_counter()
    blocks = _blocks(plan.runs)
    assignment = [blocks[w :: plan.workers] for w in range(plan.workers)]
    assignment = [a for a in assignment if a]
    if len(assignment) == 1:
        parts = [_worker(model, n, plan.seed, assignment[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(assignment)) as pool:
            futures = [pool.submit(_worker, model, n, plan.seed, a) for a in assignment]
            parts = [f.result() for f in futures]
    results = sorted((item for part in parts for item in part), key=lambda item: item[0])

    r = model.r
    sums = [[0] * r for _ in range(n + 1)]
    squares = [[[0] * r for _ in range(r)] for _ in range(n + 1)]
    lo = [list(x) for x in results[0][3]]
    hi = [list(x) for x in results[0][4]]
    for _, s, S, bl, bh in results:
        for j in range(n + 1):
            for i in range(r):
                sums[j][i] += s[j][i]
                lo[j][i] = min(lo[j][i], bl[j][i])
                hi[j][i] = max(hi[j][i], bh[j][i])
                for k in range(r):
                    squares[j][i][k] += S[j][i][k]
    elapsed = time.perf_counter() - start
    return SimulationSummary(n, plan.runs, plan.seed, plan.workers, sums, squares, lo, hi, elapsed)
