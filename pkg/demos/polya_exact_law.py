"""Exact law of a two-color Pólya urn drawing two balls at a time.

Each step draws two balls with replacement and adds one ball of the drawn
color for every ball drawn, so the reduced matrix is ``2 I``.  We print the
exact distribution for the first few steps and compare the exact mean with
the closed-form product.
"""

from __future__ import annotations

from urnlab import classify, evolve_distribution, load_bundled, mean_product_formula
from urnlab.io import rational_str


def main() -> None:
    model = load_bundled("polya_r2_m2")
    verdict = classify(model.matrix)
    print(f"scheme {model.scheme}, X0 = {model.initial}, linear = {verdict.linear}, A = {verdict.A.A}")

    for n in range(4):
        dist = evolve_distribution(model, n)
        cells = ", ".join(f"{x}: {rational_str(p)}" for x, p in dist.sorted_items())
        print(f"n={n}  {cells}")

    # the mean never leaves the diagonal, by symmetry
    for n in (1, 5, 10):
        print(f"mean at n={n}:", [rational_str(v) for v in mean_product_formula(model, n)])


if __name__ == "__main__":
    main()
