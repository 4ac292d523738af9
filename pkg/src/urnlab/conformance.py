"""Pick the covariance recurrence constant that reproduces enumeration exactly.

Every candidate constant for the model's scheme is run through
:func:`urnlab.exact.moment_trajectory` and compared, step by step, with the
covariance of the enumerated law.  Candidates that evaluate to the same
numbers on the fixture (e.g. ``1/(m T^2)`` and ``(1/m - 1/T)/(T)_2`` when ``m == 1``) are grouped and
reported as coincident rather than as competing matches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from urnlab.combinatorics import enumerate_simplex
from urnlab.errors import ConformanceError
from urnlab.exact import (
    ORDERED_CONSTANTS,
    RESOLVED_CONSTANTS,
    UNORDERED_CONSTANTS,
    UNORDERED_FORMULAS,
    candidate_names,
    enumerated_moments,
    iter_distributions,
    moment_trajectory,
)
from urnlab.model import UrnModel


@dataclass
class CandidateResult:
    name: str
    formula: str
    matches: bool
    first_mismatch: int | None


@dataclass
class ConformanceReport:
    scheme: str
    r: int
    m: int
    steps: int
    candidates: list[CandidateResult]
    groups: list[list[str]]
    resolved: list[str]
    degenerate: bool
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.resolved)

    @property
    def matching_groups(self) -> list[list[str]]:
        hit = {c.name for c in self.candidates if c.matches}
        return [g for g in self.groups if g[0] in hit]

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "r": self.r,
            "m": self.m,
            "steps": self.steps,
            "candidates": [
                {"name": c.name, "formula": c.formula, "matches": c.matches, "first_mismatch_step": c.first_mismatch}
                for c in self.candidates
            ],
            "coincident_groups": self.groups,
            "resolved": self.resolved,
            "degenerate": self.degenerate,
            "resolved_table": {str(k): v for k, v in RESOLVED_CONSTANTS.items()},
            "notes": self.notes,
        }


def _signatures(model: UrnModel, n: int, cap: int | None) -> dict[str, tuple]:
    """Values each candidate actually feeds into the recurrence on this fixture."""
    m = model.m
    Ts = [model.total(j) for j in range(n)]
    if not model.scheme.ordered:
        return {name: tuple(f(T, m) for T in Ts) for name, f in UNORDERED_CONSTANTS.items()}
    dists = list(iter_distributions(model, max(n - 1, 0), cap))[:n]
    ks = enumerate_simplex(model.r, m)
    out = {}
    for name, const in ORDERED_CONSTANTS.items():
        sig = []
        for T, dist in zip(Ts, dists):
            norm = const.normalizer(T, m)
            sig.append(tuple(norm * dist.expect(lambda x, k=k: const.weight(x, k)) for k in ks))
        out[name] = tuple(sig)
    return out


def conform(model: UrnModel, n: int, cap: int | None = None, strict: bool = True) -> ConformanceReport:
    """Run every candidate constant against enumeration for steps ``0..n``.

    Raises :class:`ConformanceError` (when ``strict``) if no candidate
    matches, or if two distinguishable candidates both match on a fixture
    with ``m >= 2`` and ``n >= 2``.
    """
    truth = enumerated_moments(model, n, cap)
    names = candidate_names(model.scheme)
    results: list[CandidateResult] = []
    trajectories: dict[str, list] = {}
    for name in names:
        traj = moment_trajectory(model, n, name, cap)
        trajectories[name] = [s.sigma for s in traj]
        bad = next((t.step for t, s in zip(truth, traj) if t.sigma != s.sigma), None)
        formula = ORDERED_CONSTANTS[name].formula if model.scheme.ordered else UNORDERED_FORMULAS[name]
        results.append(CandidateResult(name, formula, bad is None, bad))

    sigs = _signatures(model, n, cap)
    groups: list[list[str]] = []
    for name in names:
        for g in groups:
            if sigs[g[0]] == sigs[name]:
                g.append(name)
                break
        else:
            groups.append([name])

    notes = []
    for g in groups:
        if len(g) > 1:
            notes.append(f"candidates {g} coincide on this fixture")
    informative = len({_freeze(trajectories[g[0]]) for g in groups}) > 1
    degenerate = model.m == 1 or n < 2 or not informative
    if model.m == 1:
        notes.append("m == 1: a single draw, with and without replacement coincide")
    if not informative and len(groups) > 1:
        notes.append("all candidates give identical trajectories; constant not identifiable")

    report = ConformanceReport(str(model.scheme), model.r, model.m, n, results, groups, [], degenerate, notes)
    hits = report.matching_groups
    if not hits:
        if strict:
            raise ConformanceError(f"no candidate matches enumeration for scheme {model.scheme}")
        return report
    if len(hits) > 1 and not degenerate:
        if strict:
            raise ConformanceError(f"ambiguous: distinguishable candidates {hits} all match")
        return report
    report.resolved = sorted({name for g in hits for name in g}, key=names.index)
    return report


def _freeze(mats: list) -> tuple:
    return tuple(tuple(tuple(Fraction(x) for x in row) for row in M) for M in mats)
