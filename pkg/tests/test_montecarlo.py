from fractions import Fraction

import numpy as np
import pytest

from urnlab.errors import InvalidArgumentError, TenabilityError
from urnlab.exact import enumerated_moments
from urnlab.io import load_bundled
from urnlab.model import Scheme, UrnModel, build_linear_unordered
from urnlab.montecarlo import BLOCK, SimulationPlan, run_ensemble, run_path
from urnlab.sampling import rng_stream


def test_run_path_shape_and_balance():
    model = load_bundled("two_color_ordered")
    path = run_path(model, 20, rng_stream(1))
    assert len(path) == 21 and path[0] == model.initial
    for j, x in enumerate(path):
        assert sum(x) == model.total(j) and min(x) >= 0


def test_run_path_reproducible():
    model = load_bundled("polya_r3_m2")
    assert run_path(model, 15, rng_stream(5)) == run_path(model, 15, rng_stream(5))


def test_deterministic_model():
    # every row adds sigma balls of color 1 whatever is drawn
    model = UrnModel(build_linear_unordered([[2, 0], [2, 0]], 2, Scheme.M), (1, 3))
    path = run_path(model, 6, rng_stream(0))
    assert path == [(1 + 2 * j, 3) for j in range(7)]
    summary = run_ensemble(SimulationPlan(model, 6, 50))
    assert summary.exact_mean() == [13, 3]
    assert summary.exact_cov() == [[0, 0], [0, 0]]


def test_single_run_equals_path():
    model = load_bundled("mixed_r2_m3")
    summary = run_ensemble(SimulationPlan(model, 8, 1, seed=9))
    path = run_path(model, 8, rng_stream(9, 0))
    assert [tuple(s) for s in summary.sums] == path
    assert summary.minimum == summary.maximum == [list(x) for x in path]


def test_worker_count_does_not_change_result():
    model = load_bundled("polya_r2_m2")
    runs = 2 * BLOCK + 17
    one = run_ensemble(SimulationPlan(model, 4, runs, seed=3, workers=1))
    three = run_ensemble(SimulationPlan(model, 4, runs, seed=3, workers=3))
    assert one == three
    assert one.to_dict() == three.to_dict()
    other = run_ensemble(SimulationPlan(model, 4, runs, seed=4, workers=1))
    assert other.sums != one.sums


def test_summary_dict_keys():
    summary = run_ensemble(SimulationPlan(load_bundled("polya_r2_m2"), 3, 100))
    assert set(summary.to_dict()) == {"steps", "runs", "seed", "mean", "cov", "min", "max"}
    assert "wall_ms" in summary.to_dict(timing=True)


def test_ensemble_mean_close_to_exact():
    model = load_bundled("polya_r3_m3")
    truth = enumerated_moments(model, 3)[-1]
    summary = run_ensemble(SimulationPlan(model, 3, 20_000, seed=1))
    for i in range(3):
        se = (float(truth.sigma[i][i]) / 20_000) ** 0.5
        assert abs(summary.mean()[i] - float(truth.mu[i])) <= 4 * se


def test_sample_covariance_is_unbiased_formula():
    summary = run_ensemble(SimulationPlan(load_bundled("swap_r2_m3"), 2, 37, seed=2))
    R = summary.runs
    s, S = summary.sums[-1], summary.squares[-1]
    assert summary.exact_cov()[0][1] == Fraction(S[0][1] * R - s[0] * s[1], R * (R - 1))


def test_refuses_nontenable():
    with pytest.raises(TenabilityError):
        run_ensemble(SimulationPlan(load_bundled("nontenable_r2_m2"), 3, 10))
    with pytest.raises(TenabilityError):
        run_path(load_bundled("nontenable_r2_m2"), 3, rng_stream(0))


@pytest.mark.parametrize("kwargs", [{"runs": 0}, {"steps": -1}, {"workers": 0}])
def test_bad_plan(kwargs):
    base = {"steps": 2, "runs": 1}
    base.update(kwargs)
    with pytest.raises(InvalidArgumentError):
        SimulationPlan(load_bundled("polya_r2_m2"), **base)


def test_unordered_and_embedded_agree_in_distribution():
    from urnlab.model import embed_unordered_to_ordered

    model = load_bundled("mixed_r2_m3")
    emb = model.with_matrix(embed_unordered_to_ordered(model.matrix))
    a = run_ensemble(SimulationPlan(model, 4, 20_000, seed=1))
    b = run_ensemble(SimulationPlan(emb, 4, 20_000, seed=2))
    truth = enumerated_moments(model, 4)[-1]
    se = (float(truth.sigma[0][0]) / 20_000) ** 0.5
    assert abs(a.mean()[0] - b.mean()[0]) <= 4 * np.sqrt(2) * se
