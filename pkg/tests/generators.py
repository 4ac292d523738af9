"""Random integer-valid reduced matrices for round-trip and perturbation tests."""

from __future__ import annotations

import random


def random_reduced(rng: random.Random, r: int, m: int, lo: int | None = None, hi: int = 5, sigma_max: int = 10):
    """Balanced ``r x r`` matrix, entries in ``[lo, hi]``, rows congruent mod ``m``.

    Rows congruent mod ``m`` is exactly the condition for every affine
    combination ``sum_i k_i/m A_i`` to be integral.
    """
    lo = -m if lo is None else lo
    while True:
        sigma = rng.randint(1, sigma_max)
        rho = [rng.randrange(m) for _ in range(r - 1)]
        rho.append((sigma - sum(rho)) % m)
        choices = [[v for v in range(lo, hi + 1) if (v - rho[j]) % m == 0] for j in range(r)]
        rows = []
        for _ in range(r):
            for _attempt in range(50):
                head = [rng.choice(choices[j]) for j in range(r - 1)]
                last = sigma - sum(head)
                if lo <= last <= hi:
                    rows.append(head + [last])
                    break
            else:
                break
        if len(rows) == r:
            return rows
