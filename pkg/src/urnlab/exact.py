"""Exact evolution of the composition law and exact moments of linear models.

Everything here is rational arithmetic except :func:`eigen_report`.
"""

from __future__ import annotations

import os
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from urnlab.combinatorics import (
    falling_factorial,
    falling_factorial_vec,
    multiplicity_vector,
    power_vec,
)
from urnlab.errors import (
    CapacityError,
    InvalidArgumentError,
    NotLinearError,
    TenabilityError,
    UnbalancedModelError,
)
from urnlab.model import (
    ReducedMatrix,
    Scheme,
    UrnModel,
    check_tenability,
    classify,
)
from urnlab.sampling import SampleLaw, ordered_law, unordered_law

Vector = tuple[int, ...]
Matrix = list[list[Fraction]]

DEFAULT_CAP = 10**6


def default_cap() -> int:
    env = os.environ.get("URNLAB_CAP")
    return int(env) if env else DEFAULT_CAP


# --------------------------------------------------------------------- #
# small exact linear algebra
# --------------------------------------------------------------------- #


def _zeros(r: int) -> Matrix:
    return [[Fraction(0)] * r for _ in range(r)]


def _matmul(X: Matrix, Y: Matrix) -> Matrix:
    n, p = len(X), len(Y[0])
    return [[sum((X[i][t] * Y[t][j] for t in range(len(Y))), Fraction(0)) for j in range(p)] for i in range(n)]


def _transpose(X: Matrix) -> Matrix:
    return [list(col) for col in zip(*X)]


def _add(X: Matrix, Y: Matrix, scale: Fraction = Fraction(1)) -> Matrix:
    return [[x + scale * y for x, y in zip(rx, ry)] for rx, ry in zip(X, Y)]


def _outer(u: Sequence[Fraction], v: Sequence[Fraction]) -> Matrix:
    return [[Fraction(a) * b for b in v] for a in u]


def _vecmat(v: Sequence[Fraction], X: Matrix) -> list[Fraction]:
    return [sum((v[i] * X[i][j] for i in range(len(v))), Fraction(0)) for j in range(len(X[0]))]


def _frac_matrix(A: ReducedMatrix) -> Matrix:
    return [[Fraction(x) for x in row] for row in A.A]


# --------------------------------------------------------------------- #
# exact distribution
# --------------------------------------------------------------------- #


@dataclass
class ExactDistribution:
    step: int
    support: dict[Vector, Fraction]

    def __len__(self) -> int:
        return len(self.support)

    def mean(self) -> list[Fraction]:
        r = len(next(iter(self.support)))
        mu = [Fraction(0)] * r
        for x, p in self.support.items():
            for i in range(r):
                mu[i] += p * x[i]
        return mu

    def covariance(self) -> Matrix:
        mu = self.mean()
        r = len(mu)
        out = _zeros(r)
        for x, p in self.support.items():
            dx = [x[i] - mu[i] for i in range(r)]
            for i in range(r):
                for j in range(r):
                    out[i][j] += p * dx[i] * dx[j]
        return out

    def expect(self, f: Callable[[Vector], int | Fraction]) -> Fraction:
        return sum((p * f(x) for x, p in self.support.items()), Fraction(0))

    def total_probability(self) -> Fraction:
        return sum(self.support.values(), Fraction(0))

    def sorted_items(self) -> list[tuple[Vector, Fraction]]:
        return sorted(self.support.items())


def _kernel(model: UrnModel, x: Vector) -> dict[Vector, Fraction]:
    """One-step transition law ``add vector -> probability`` from composition ``x``."""
    law = SampleLaw(model.scheme, x, model.m)
    probs = ordered_law(law) if model.scheme.ordered else unordered_law(law)
    out: dict[Vector, Fraction] = {}
    rows = model.matrix.rows
    for index, p in probs.items():
        add = rows[index]
        out[add] = out.get(add, Fraction(0)) + p
    return out


def iter_distributions(model: UrnModel, n: int, cap: int | None = None) -> Iterator[ExactDistribution]:
    """Yield the exact law of ``X_0, X_1, ..., X_n``."""
    if n < 0:
        raise InvalidArgumentError("number of steps must be >= 0")
    report = check_tenability(model.matrix)
    if not report.tenable:
        raise TenabilityError(f"model is not tenable; offending rows: {report.violations[:5]}")
    model.sigma  # balance check
    cap = default_cap() if cap is None else cap
    dist = {model.initial: Fraction(1)}
    yield ExactDistribution(0, dist)
    for step in range(1, n + 1):
        nxt: dict[Vector, Fraction] = {}
        for x, px in dist.items():
            for add, pa in _kernel(model, x).items():
                y = tuple(a + b for a, b in zip(x, add))
                nxt[y] = nxt.get(y, Fraction(0)) + px * pa
            if len(nxt) > cap:
                raise CapacityError(f"support exceeded cap {cap} at step {step}")
        dist = nxt
        yield ExactDistribution(step, dist)


def evolve_distribution(model: UrnModel, n: int, cap: int | None = None) -> ExactDistribution:
    """Exact law of ``X_n`` by pushing mass through every possible sample."""
    for dist in iter_distributions(model, n, cap):
        pass
    return dist


# --------------------------------------------------------------------- #
# moments
# --------------------------------------------------------------------- #


@dataclass
class MomentState:
    step: int
    mu: list[Fraction]
    sigma: Matrix | None = None


def _reduced(model: UrnModel) -> ReducedMatrix:
    verdict = classify(model.matrix)
    if not verdict.linear:
        raise NotLinearError(
            f"model is not linear; violations at {verdict.violating_indices[:5]}"
        )
    return verdict.A


def mean_trajectory(model: UrnModel, n: int) -> list[list[Fraction]]:
    """``mu_0 .. mu_n`` with ``mu_j = mu_{j-1} (I + A / T_{j-1})``."""
    A = _frac_matrix(_reduced(model))
    r = model.r
    mu = [Fraction(x) for x in model.initial]
    out = [mu]
    for j in range(n):
        T = model.total(j)
        step = _vecmat(mu, A)
        mu = [mu[i] + step[i] / T for i in range(r)]
        out.append(mu)
    return out


def mean_product_formula(model: UrnModel, n: int) -> list[Fraction]:
    if n < 0:
        raise InvalidArgumentError("number of steps must be >= 0")
    return mean_trajectory(model, n)[-1]


def _safe_falling_T2(T: int, m: int) -> Fraction:
    # (1/m - 1/T)/(T)_2 == (T-m)/(m T^2 (T-1)); T == 1 forces m == 1 where it cancels to 1/T^2
    if T == 1:
        return Fraction(1, m)
    return (Fraction(1, m) - Fraction(1, T)) / (T * (T - 1))


# Constant multiplying A^T (T diag(mu) - Sigma - mu^T mu) A in the unordered recurrence.
UNORDERED_CONSTANTS: dict[str, Callable[[int, int], Fraction]] = {
    "inv_m_T2": lambda T, m: Fraction(1, m * T * T),
    "falling_T2": _safe_falling_T2,
    "m1_over_m_T2": lambda T, m: Fraction(m - 1, m * T * T),
}

UNORDERED_FORMULAS = {
    "inv_m_T2": "1/(m*T^2)",
    "falling_T2": "(1/m - 1/T)/(T)_2",
    "m1_over_m_T2": "(m-1)/(m*T^2)",
}


@dataclass(frozen=True)
class OrderedConstant:
    """Normalizer and moment kind for the ordered mixed-moment term."""

    normalizer: Callable[[int, int], Fraction]
    weight: Callable[[Vector, Vector], int]
    formula: str


ORDERED_CONSTANTS: dict[str, OrderedConstant] = {
    "falling_Tm": OrderedConstant(
        lambda T, m: Fraction(1, falling_factorial(T, m)), falling_factorial_vec, "1/(T)_m with E[(X)_j(d)]"
    ),
    "power_Tm": OrderedConstant(lambda T, m: Fraction(1, T**m), power_vec, "1/T^m with E[X^j(d)]"),
    "falling_Tm_power_moments": OrderedConstant(
        lambda T, m: Fraction(1, falling_factorial(T, m)), power_vec, "1/(T)_m with E[X^j(d)]"
    ),
}

# Resolved by exact agreement with enumeration (see urnlab.conformance).
RESOLVED_CONSTANTS: dict[Scheme, str] = {
    Scheme.M: "falling_T2",
    Scheme.R: "inv_m_T2",
    Scheme.MSEQ: "falling_Tm",
    Scheme.RSEQ: "power_Tm",
}


def candidate_names(scheme: Scheme) -> list[str]:
    return list(ORDERED_CONSTANTS if Scheme(scheme).ordered else UNORDERED_CONSTANTS)


def _unordered_step(
    A: Matrix, At: Matrix, mu: list[Fraction], S: Matrix, T: int, c: Fraction
) -> Matrix:
    r = len(mu)
    B = [[(Fraction(i == j) + A[i][j] / T) for j in range(r)] for i in range(r)]
    inner = _add(_outer(mu, mu), S)
    inner = [[(T * mu[i] if i == j else Fraction(0)) - inner[i][j] for j in range(r)] for i in range(r)]
    return _add(_matmul(_matmul(_transpose(B), S), B), _matmul(_matmul(At, inner), A), c)


def _ordered_step(
    model: UrnModel,
    A: Matrix,
    At: Matrix,
    mu: list[Fraction],
    S: Matrix,
    T: int,
    dist: ExactDistribution,
    const: OrderedConstant,
) -> Matrix:
    r, m = model.r, model.m
    B = [[(Fraction(i == j) + A[i][j] / T) for j in range(r)] for i in range(r)]
    out = _matmul(_matmul(_transpose(B), S), B)
    out = _add(out, _matmul(_matmul(At, _add(_outer(mu, mu), S)), A), Fraction(-1, T * T))
    # group sequences by multiplicity: sum_d a_d^T a_d per k
    grouped: dict[Vector, Matrix] = {}
    for d, add in model.matrix.rows.items():
        k = multiplicity_vector(d, r)
        grouped[k] = _add(grouped.get(k, _zeros(r)), _outer(add, add))
    norm = const.normalizer(T, m)
    for k, G in grouped.items():
        w = dist.expect(lambda x, k=k: const.weight(x, k))
        if w:
            out = _add(out, G, norm * w)
    return out


def moment_trajectory(
    model: UrnModel,
    n: int,
    constant: str | None = None,
    cap: int | None = None,
) -> list[MomentState]:
    """Exact ``(mu_j, Sigma_j)`` for ``j = 0..n`` from the covariance recurrence.

    ``constant`` picks the recurrence constant by name (see
    :data:`UNORDERED_CONSTANTS` / :data:`ORDERED_CONSTANTS`); the default is
    the one resolved for the model's scheme.  Ordered schemes read the mixed
    moments of the previous step from the exact distribution, so they obey
    the enumeration cap.
    """
    reduced = _reduced(model)
    scheme = model.scheme
    constant = constant or RESOLVED_CONSTANTS[scheme]
    if constant not in candidate_names(scheme):
        raise InvalidArgumentError(f"unknown constant {constant!r} for scheme {scheme}")
    A = _frac_matrix(reduced)
    At = _transpose(A)
    mus = mean_trajectory(model, n)
    r = model.r
    S = _zeros(r)
    states = [MomentState(0, mus[0], S)]
    dists = iter_distributions(model, n - 1, cap) if scheme.ordered and n > 0 else None
    for j in range(1, n + 1):
        T = model.total(j - 1)
        if scheme.ordered:
            dist = next(dists)
            S = _ordered_step(model, A, At, mus[j - 1], S, T, dist, ORDERED_CONSTANTS[constant])
        else:
            S = _unordered_step(A, At, mus[j - 1], S, T, UNORDERED_CONSTANTS[constant](T, model.m))
        states.append(MomentState(j, mus[j], S))
    return states


def covariance_recurrence(model: UrnModel, n: int, constant: str | None = None, cap: int | None = None) -> MomentState:
    return moment_trajectory(model, n, constant, cap)[-1]


def enumerated_moments(model: UrnModel, n: int, cap: int | None = None) -> list[MomentState]:
    """Mean and covariance of the exact law at every step ``0..n``."""
    return [MomentState(d.step, d.mean(), d.covariance()) for d in iter_distributions(model, n, cap)]


# --------------------------------------------------------------------- #
# spectrum
# --------------------------------------------------------------------- #


@dataclass
class EigenReport:
    sigma: int
    eigenvalues: list[complex]
    balance_eigenvector: bool
    largest_is_sigma: bool
    lambda2: float
    ratio: float
    small_index: bool
    upper_triangular: bool
    lower_triangular: bool

    @property
    def triangular(self) -> bool:
        return self.upper_triangular or self.lower_triangular

    def to_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "balance_eigenvector": self.balance_eigenvector,
            "largest_is_sigma": self.largest_is_sigma,
            "lambda2": self.lambda2,
            "ratio": self.ratio,
            "small_index": self.small_index,
            "triangular": self.triangular,
            "upper_triangular": self.upper_triangular,
            "lower_triangular": self.lower_triangular,
        }


def eigen_report(A: ReducedMatrix | Sequence[Sequence[int]], tol: float = 1e-9) -> EigenReport:
    """Spectral diagnostics of a reduced matrix.

    The all-ones vector is checked exactly as a right eigenvector for the
    balance ``sigma``; the rest is floating point.  ``lambda2`` is the largest
    real part left after removing one copy of ``sigma``.
    """
    if not isinstance(A, ReducedMatrix):
        A = ReducedMatrix.from_rows(A)
    rows = A.A
    r = len(rows)
    if any(sum(row) != A.sigma for row in rows):
        raise UnbalancedModelError("A 1^T != sigma 1^T")
    eig = np.linalg.eigvals(np.array(rows, dtype=float))
    eig = sorted((complex(z) for z in eig), key=lambda z: (-z.real, -abs(z.imag)))
    pos = min(range(r), key=lambda i: abs(eig[i] - A.sigma))
    found = abs(eig[pos] - A.sigma) <= tol * max(1.0, A.sigma)
    largest = found and all(z.real <= A.sigma + tol * max(1.0, A.sigma) for z in eig)
    rest = eig[:pos] + eig[pos + 1 :]
    lam2 = max(z.real for z in rest)
    ratio = lam2 / A.sigma
    upper = all(rows[i][j] == 0 for i in range(r) for j in range(i))
    lower = all(rows[i][j] == 0 for i in range(r) for j in range(i + 1, r))
    return EigenReport(A.sigma, eig, True, largest, lam2, ratio, ratio < 0.5, upper, lower)
