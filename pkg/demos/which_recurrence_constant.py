"""Which constant makes the covariance recurrence exact?

Several plausible constants could sit in front of the fluctuation term of
the covariance recurrence.  Here every candidate is run against brute-force
enumeration for each sampling scheme on a three-ball-draw fixture, where the
candidates are distinguishable.
"""

from __future__ import annotations

from urnlab import Scheme, conform, embed_unordered_to_ordered, load_bundled
from urnlab.model import ReplacementMatrix


def variants(name: str):
    base = load_bundled(name)
    for scheme in (Scheme.M, Scheme.R):
        model = base.with_matrix(ReplacementMatrix(base.r, base.m, scheme, base.matrix.rows))
        yield scheme, model
        yield scheme.as_ordered, model.with_matrix(embed_unordered_to_ordered(model.matrix))


def main() -> None:
    for scheme, model in variants("mixed_r2_m3"):
        report = conform(model, 5)
        marks = "  ".join(f"{c.name}:{'match' if c.matches else f'off@{c.first_mismatch}'}" for c in report.candidates)
        print(f"{str(scheme):5s} -> {report.resolved}   [{marks}]")

    # with two balls per draw, two of the unordered candidates are the same number
    report = conform(load_bundled("polya_r2_m2"), 5)
    print("m=2, scheme R:", report.resolved, report.notes)


if __name__ == "__main__":
    main()
