"""Monte Carlo against the exact engine.

Simulates the Pólya urn many times and reports how far the empirical mean
and variance of the first color are from the exact values, in units of
standard error.  The result is the same for any number of workers.
"""

from __future__ import annotations

import math

from urnlab import SimulationPlan, iter_distributions, load_bundled, run_ensemble


def main(runs: int = 100_000, steps: int = 5) -> None:
    model = load_bundled("polya_r2_m2")
    exact = list(iter_distributions(model, steps))[-1]
    mu = exact.mean()[0]
    var = exact.expect(lambda x: (x[0] - mu) ** 2)
    mu4 = exact.expect(lambda x: (x[0] - mu) ** 4)

    one = run_ensemble(SimulationPlan(model, steps, runs, seed=1, workers=1))
    four = run_ensemble(SimulationPlan(model, steps, runs, seed=1, workers=4))
    print("identical across worker counts:", one == four)

    z_mean = (one.mean()[0] - float(mu)) / math.sqrt(var / runs)
    z_var = (one.cov()[0][0] - float(var)) / math.sqrt((mu4 - var**2) / runs)
    print(f"exact mean {float(mu):.4f}, simulated {one.mean()[0]:.4f} ({z_mean:+.2f} SE)")
    print(f"exact var  {float(var):.4f}, simulated {one.cov()[0][0]:.4f} ({z_var:+.2f} SE)")


if __name__ == "__main__":
    main()
