"""Ordered samples and the balancing condition.

With ordered draws of two balls from two colors, the rows are indexed by
the sequences 11, 12, 21, 22.  Linearity only constrains the mixed
sequences through their sum.  We check the bundled example, break the
condition, and confirm that an unordered model and its ordered copy evolve
identically.
"""

from __future__ import annotations

from urnlab import classify, embed_unordered_to_ordered, iter_distributions, load_bundled
from urnlab.model import ReplacementMatrix


def main() -> None:
    model = load_bundled("two_color_ordered")
    for d, add in model.matrix.rows.items():
        print(d, "->", add)
    print("linear:", classify(model.matrix).linear)

    rows = dict(model.matrix.rows)
    rows[(1, 2)] = (3, 1)
    broken = ReplacementMatrix(2, 2, model.scheme, rows)
    verdict = classify(broken)
    print("after editing row 12, linear:", verdict.linear, "violations at multiplicities", verdict.violating_indices)

    unordered = load_bundled("mixed_r2_m3")
    ordered = unordered.with_matrix(embed_unordered_to_ordered(unordered.matrix))
    same = all(a.support == b.support for a, b in zip(iter_distributions(unordered, 5), iter_distributions(ordered, 5)))
    print("unordered model and its ordered copy agree for 5 steps:", same)


if __name__ == "__main__":
    main()
