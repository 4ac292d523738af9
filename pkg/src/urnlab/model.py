"""Urn model definition, validation, linearity classification and synthesis.

A replacement matrix maps every possible sample to the vector of balls
added (negative: removed) per color.  Unordered schemes (``M``, ``R``) are
indexed by simplex points ``k``; ordered schemes (``MSEQ``, ``RSEQ``) by
draw sequences ``d``.
"""

from __future__ import annotations

import enum
import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from urnlab.combinatorics import (
    binom_shift,
    enumerate_sequences,
    enumerate_simplex,
    multinomial,
    multiplicity_vector,
)
from urnlab.errors import (
    InvalidArgumentError,
    InvalidDimensionError,
    NonIntegralModelError,
    NonpositiveBalanceError,
    UnbalancedModelError,
    UrnError,
)

log = logging.getLogger(__name__)

Vector = tuple[int, ...]


class Scheme(str, enum.Enum):
    M = "M"
    R = "R"
    MSEQ = "MSEQ"
    RSEQ = "RSEQ"

    @property
    def ordered(self) -> bool:
        return self in (Scheme.MSEQ, Scheme.RSEQ)

    @property
    def with_replacement(self) -> bool:
        return self in (Scheme.R, Scheme.RSEQ)

    @property
    def as_ordered(self) -> Scheme:
        return Scheme.RSEQ if self.with_replacement else Scheme.MSEQ

    @property
    def as_unordered(self) -> Scheme:
        return Scheme.R if self.with_replacement else Scheme.M

    def __str__(self) -> str:
        return self.value


def index_set(r: int, m: int, scheme: Scheme) -> list[Vector]:
    """Canonically ordered index set (sequences or simplex points)."""
    return enumerate_sequences(r, m) if scheme.ordered else enumerate_simplex(r, m)


def sample_counts(index: Vector, r: int, scheme: Scheme) -> Vector:
    """Per-color multiplicities of a sample index under ``scheme``."""
    return multiplicity_vector(index, r) if scheme.ordered else tuple(index)


@dataclass(frozen=True)
class ReplacementMatrix:
    """Scheme-tagged table ``index -> addition vector``.

    Construction checks that the key set is exactly the index set of the
    scheme; balance is checked separately by :func:`validate_balance`.
    """

    r: int
    m: int
    scheme: Scheme
    rows: Mapping[Vector, Vector] = field(repr=False)

    def __post_init__(self) -> None:
        if self.r < 2 or self.m < 1:
            raise InvalidDimensionError(f"need r >= 2 and m >= 1, got r={self.r}, m={self.m}")
        scheme = Scheme(self.scheme)
        object.__setattr__(self, "scheme", scheme)
        expected = index_set(self.r, self.m, scheme)
        given = {tuple(k): tuple(int(x) for x in v) for k, v in dict(self.rows).items()}
        if set(given) != set(expected):
            missing = sorted(set(expected) - set(given))
            extra = sorted(set(given) - set(expected))
            raise InvalidArgumentError(
                f"row index set mismatch for scheme {scheme}: missing={missing[:5]}, extra={extra[:5]}"
            )
        for k, v in given.items():
            if len(v) != self.r:
                raise InvalidArgumentError(f"row {k} has length {len(v)}, expected {self.r}")
        # canonical insertion order
        object.__setattr__(self, "rows", {k: given[k] for k in expected})

    def indices(self) -> list[Vector]:
        return list(self.rows)

    def __getitem__(self, index: Sequence[int]) -> Vector:
        return self.rows[tuple(index)]

    def extreme_row(self, i: int) -> Vector:
        """Row of the sample consisting only of color ``i`` (0-based)."""
        if self.scheme.ordered:
            return self.rows[(i + 1,) * self.m]
        k = [0] * self.r
        k[i] = self.m
        return self.rows[tuple(k)]


@dataclass(frozen=True)
class ReducedMatrix:
    """``r x r`` integer matrix of a linear model with common row sum ``sigma``."""

    A: tuple[Vector, ...]
    sigma: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> ReducedMatrix:
        A = tuple(tuple(int(x) for x in row) for row in rows)
        r = len(A)
        if r < 2 or any(len(row) != r for row in A):
            raise InvalidDimensionError("reduced matrix must be square with r >= 2")
        sums = {sum(row) for row in A}
        if len(sums) != 1:
            raise UnbalancedModelError(f"reduced matrix rows have differing sums {sorted(sums)}")
        sigma = sums.pop()
        if sigma <= 0:
            raise NonpositiveBalanceError(f"total balance must be positive, got {sigma}")
        return cls(A, sigma)

    @property
    def r(self) -> int:
        return len(self.A)

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.A]


@dataclass(frozen=True)
class UrnModel:
    matrix: ReplacementMatrix
    initial: Vector

    def __post_init__(self) -> None:
        x0 = tuple(int(x) for x in self.initial)
        object.__setattr__(self, "initial", x0)
        if len(x0) != self.matrix.r:
            raise InvalidArgumentError(f"initial composition has {len(x0)} colors, expected {self.matrix.r}")
        if any(x < 0 for x in x0):
            raise InvalidArgumentError("initial composition must be nonnegative")
        if sum(x0) < self.matrix.m:
            raise InvalidArgumentError(
                f"initial total {sum(x0)} is smaller than the sample size {self.matrix.m}"
            )

    @property
    def r(self) -> int:
        return self.matrix.r

    @property
    def m(self) -> int:
        return self.matrix.m

    @property
    def scheme(self) -> Scheme:
        return self.matrix.scheme

    @property
    def T0(self) -> int:
        return sum(self.initial)

    @property
    def sigma(self) -> int:
        return validate_balance(self.matrix)

    def total(self, n: int) -> int:
        """Deterministic number of balls after ``n`` steps."""
        return n * self.sigma + self.T0

    def with_matrix(self, matrix: ReplacementMatrix) -> UrnModel:
        return UrnModel(matrix, self.initial)


# --------------------------------------------------------------------- #
# Validation
# --------------------------------------------------------------------- #


def validate_balance(matrix: ReplacementMatrix) -> int:
    """Return the common row sum, raising if rows disagree or it is not positive."""
    sums: dict[int, Vector] = {}
    for index, add in matrix.rows.items():
        sums.setdefault(sum(add), index)
    if len(sums) != 1:
        detail = ", ".join(f"{s} at {idx}" for s, idx in sorted(sums.items()))
        raise UnbalancedModelError(f"row sums differ: {detail}")
    sigma = next(iter(sums))
    if sigma <= 0:
        raise NonpositiveBalanceError(f"total balance must be positive, got {sigma}")
    return sigma


@dataclass
class TenabilityReport:
    tenable: bool
    violations: list[tuple[Vector, Vector]]

    def __bool__(self) -> bool:
        return self.tenable


def row_is_tenable(add: Sequence[int], counts: Sequence[int], scheme: Scheme) -> bool:
    if scheme.with_replacement:
        return all(a >= (-1 if k > 0 else 0) for a, k in zip(add, counts))
    return all(a >= -k for a, k in zip(add, counts))


def check_tenability(matrix: ReplacementMatrix) -> TenabilityReport:
    """Row-wise tenability check, listing every offending ``(index, row)``.

    Ordered rows are checked individually against the multiplicities of
    their sequence.
    """
    bad = []
    for index, add in matrix.rows.items():
        counts = sample_counts(index, matrix.r, matrix.scheme)
        if not row_is_tenable(add, counts, matrix.scheme):
            bad.append((index, add))
    return TenabilityReport(not bad, bad)


def validate_tenability(matrix: ReplacementMatrix) -> bool:
    return check_tenability(matrix).tenable


# --------------------------------------------------------------------- #
# Classification
# --------------------------------------------------------------------- #


@dataclass(frozen=True)
class Violation:
    """One simplex point where the linearity condition fails."""

    index: Vector
    actual: tuple[Fraction, ...]
    expected: tuple[Fraction, ...]


@dataclass
class LinearVerdict:
    linear: bool
    A: ReducedMatrix | None
    violations: list[Violation]

    def __bool__(self) -> bool:
        return self.linear

    @property
    def violating_indices(self) -> list[Vector]:
        return [v.index for v in self.violations]


def _extreme_rows(matrix: ReplacementMatrix) -> list[Vector]:
    return [matrix.extreme_row(i) for i in range(matrix.r)]


def _affine_row(k: Sequence[int], extremes: Sequence[Vector], m: int) -> tuple[Fraction, ...]:
    r = len(extremes)
    return tuple(sum((Fraction(k[i], m) * extremes[i][c] for i in range(r)), Fraction(0)) for c in range(r))


def classify_unordered(matrix: ReplacementMatrix) -> LinearVerdict:
    """Check that every row is the ``k/m``-weighted mix of the extreme rows."""
    if matrix.scheme.ordered:
        raise InvalidArgumentError("classify_unordered needs scheme M or R")
    validate_balance(matrix)
    extremes = _extreme_rows(matrix)
    violations = []
    for k, add in matrix.rows.items():
        expected = _affine_row(k, extremes, matrix.m)
        actual = tuple(Fraction(a) for a in add)
        if actual != expected:
            violations.append(Violation(k, actual, expected))
    if violations:
        return LinearVerdict(False, None, violations)
    return LinearVerdict(True, ReducedMatrix.from_rows(extremes), [])


def ordered_profile(matrix: ReplacementMatrix) -> dict[Vector, Vector]:
    """Sum of ordered rows grouped by multiplicity vector."""
    r = matrix.r
    out = {k: [0] * r for k in enumerate_simplex(r, matrix.m)}
    for d, add in matrix.rows.items():
        acc = out[multiplicity_vector(d, r)]
        for c in range(r):
            acc[c] += add[c]
    return {k: tuple(v) for k, v in out.items()}


def classify_ordered(matrix: ReplacementMatrix) -> LinearVerdict:
    """Check the grouped-sum condition for ordered samples.

    For each ``k`` the rows of all sequences with multiplicities ``k`` must
    sum to ``sum_i C(m-1; k - e_i) * a_{(i,...,i)}``.  Integer arithmetic.
    """
    if not matrix.scheme.ordered:
        raise InvalidArgumentError("classify_ordered needs scheme MSEQ or RSEQ")
    validate_balance(matrix)
    r, m = matrix.r, matrix.m
    extremes = _extreme_rows(matrix)
    violations = []
    for k, lhs in ordered_profile(matrix).items():
        rhs = [0] * r
        for i in range(r):
            w = binom_shift(m, k, i)
            if w:
                for c in range(r):
                    rhs[c] += w * extremes[i][c]
        if tuple(lhs) != tuple(rhs):
            violations.append(
                Violation(k, tuple(Fraction(x) for x in lhs), tuple(Fraction(x) for x in rhs))
            )
    if violations:
        return LinearVerdict(False, None, violations)
    return LinearVerdict(True, ReducedMatrix.from_rows(extremes), [])


def classify(matrix: ReplacementMatrix) -> LinearVerdict:
    return classify_ordered(matrix) if matrix.scheme.ordered else classify_unordered(matrix)


# --------------------------------------------------------------------- #
# Synthesis
# --------------------------------------------------------------------- #


def _raw_rows(A: ReducedMatrix | Sequence[Sequence[int]]) -> list[Vector]:
    rows = A.A if isinstance(A, ReducedMatrix) else A
    out = [tuple(int(x) for x in row) for row in rows]
    r = len(out)
    if r < 2 or any(len(row) != r for row in out):
        raise InvalidDimensionError("reduced matrix must be square with r >= 2")
    return out


def build_linear_unordered(
    A: ReducedMatrix | Sequence[Sequence[int]], m: int, scheme: Scheme | str = Scheme.R
) -> ReplacementMatrix:
    """Expand a reduced matrix into the full linear unordered replacement matrix.

    Checks run in the order integrality, balance; tenability is only
    reported (logged), since moment recurrences are defined regardless.
    """
    scheme = Scheme(scheme)
    if scheme.ordered:
        raise InvalidArgumentError("build_linear_unordered needs scheme M or R")
    extremes = _raw_rows(A)
    r = len(extremes)
    rows = {}
    for k in enumerate_simplex(r, m):
        row = _affine_row(k, extremes, m)
        if any(x.denominator != 1 for x in row):
            raise NonIntegralModelError(f"row for k={k} is non-integral: {[str(x) for x in row]}")
        rows[k] = tuple(int(x) for x in row)
    ReducedMatrix.from_rows(extremes)
    matrix = ReplacementMatrix(r, m, scheme, rows)
    report = check_tenability(matrix)
    if not report.tenable:
        log.info("synthesized model is not tenable under %s at %d rows", scheme, len(report.violations))
    return matrix


def embed_unordered_to_ordered(matrix: ReplacementMatrix) -> ReplacementMatrix:
    """Give every sequence the row of its multiplicity vector."""
    if matrix.scheme.ordered:
        raise InvalidArgumentError("matrix is already ordered")
    r, m = matrix.r, matrix.m
    rows = {d: matrix.rows[multiplicity_vector(d, r)] for d in enumerate_sequences(r, m)}
    return ReplacementMatrix(r, m, matrix.scheme.as_ordered, rows)


AssignmentRule = Callable[[Vector, list[Vector]], Sequence[int]]


def default_assignment(k: Vector, sequences: list[Vector]) -> list[int]:
    """Colors in blocks ``0..r-1`` of sizes ``C(m-1; k - e_i)`` over canonical order."""
    m = sum(k)
    out: list[int] = []
    for i in range(len(k)):
        out.extend([i] * binom_shift(m, k, i))
    return out


def build_m1_embedding(
    C: ReducedMatrix | Sequence[Sequence[int]],
    m: int,
    scheme: Scheme | str = Scheme.RSEQ,
    assign: AssignmentRule = default_assignment,
) -> ReplacementMatrix:
    """Ordered model whose rows are all rows of the single-draw matrix ``C``.

    ``assign(k, sequences)`` returns, for the sequences with multiplicity
    ``k``, the 0-based row of ``C`` each one receives.  Row ``i`` must be
    used exactly ``C(m-1; k - e_i)`` times.
    """
    scheme = Scheme(scheme)
    if not scheme.ordered:
        raise InvalidArgumentError("build_m1_embedding needs scheme MSEQ or RSEQ")
    crow = _raw_rows(C)
    reduced = ReducedMatrix.from_rows(crow)
    r = reduced.r
    groups: dict[Vector, list[Vector]] = {}
    for d in enumerate_sequences(r, m):
        groups.setdefault(multiplicity_vector(d, r), []).append(d)
    rows = {}
    for k, seqs in groups.items():
        if sum(binom_shift(m, k, i) for i in range(r)) != multinomial(m, k):
            raise UrnError(f"internal: block sizes at k={k} do not add up")
        colors = list(assign(k, seqs))
        if len(colors) != len(seqs):
            raise InvalidArgumentError(f"assignment at k={k} returned {len(colors)} colors for {len(seqs)} sequences")
        for i in range(r):
            if colors.count(i) != binom_shift(m, k, i):
                raise InvalidArgumentError(f"assignment at k={k} uses row {i} the wrong number of times")
        for d, i in zip(seqs, colors):
            rows[d] = crow[i]
    matrix = ReplacementMatrix(r, m, scheme, rows)
    verdict = classify_ordered(matrix)
    if not verdict.linear or verdict.A != reduced:
        raise UrnError("internal: m=1 embedding is not linear with the requested matrix")
    return matrix
