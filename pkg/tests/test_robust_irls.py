import math

import numpy as np
import pytest

from certline import (
    Dataset,
    IrlsConfig,
    LineParams,
    canonicalize,
    gm_cost,
    gm_weight,
    irls_step,
    lines_equal,
    moments,
    residuals,
    run_irls,
    solve_tls,
)

from conftest import DEEP_IRLS, random_dataset


def gm_cost_at_angle(d, theta, w):
    """GM cost with the offset eliminated through the weighted centroid."""
    n = np.array([math.cos(theta), math.sin(theta)])
    m = moments(d, w)
    c = float(m.b_centroid @ n)
    line = LineParams(n[0], n[1], c)
    return gm_cost(line, d)


def test_gm_weight_values():
    assert gm_weight(0.0) == 2.0
    assert gm_weight(1.0) == 0.5
    assert gm_weight(3.0) == pytest.approx(0.02, abs=1e-15)


def test_gm_weight_even_and_bounded():
    rng = np.random.default_rng(0)
    e = rng.normal(scale=3.0, size=1000)
    w = gm_weight(e)
    np.testing.assert_allclose(w, gm_weight(-e), atol=0)
    assert np.all(w > 0) and np.all(w <= 2.0)


def test_irls_step_unit_weights_equals_tls():
    rng = np.random.default_rng(1)
    d = random_dataset(rng, 18)
    line, cost = irls_step(d, np.ones(18))
    assert lines_equal(line, solve_tls(d).line, tol=1e-12)
    assert cost == pytest.approx(gm_cost(line, d), abs=1e-14)


def test_irls_step_concentrated_weights_interpolates():
    d = Dataset.from_points([(0.0, 0.0), (2.0, 1.0), (1.0, 4.0), (-3.0, 2.0)])
    w = np.array([1.0, 1.0, 1e-12, 1e-12])
    line, _ = irls_step(d, w)
    e = residuals(line, d)
    assert abs(e[0]) <= 1e-9 and abs(e[1]) <= 1e-9


def test_irls_first_step_improves_on_tls(golden_pass):
    d = golden_pass["dataset"]
    tls_line, tls_gm = irls_step(d, np.ones(d.n))
    w = np.maximum(gm_weight(residuals(tls_line, d)), 1e-12)
    _, stepped_gm = irls_step(d, w)
    assert stepped_gm < tls_gm


def test_run_irls_collinear_quick_convergence():
    d = Dataset.from_points([(t, 2 * t + 1) for t in (-2, -1, 1, 3)])
    res = run_irls(d)
    assert res.converged
    assert res.iterations <= 2
    assert res.gm_cost_final <= 1e-20


def test_run_irls_trace_and_weight_invariants():
    rng = np.random.default_rng(3)
    d = random_dataset(rng, 25)
    res = run_irls(d, DEEP_IRLS)
    assert len(res.trace) == res.iterations
    assert all(isinstance(c, float) for c, _ in res.trace)
    assert np.all(res.weights >= DEEP_IRLS.weight_floor)
    assert np.all(res.weights <= 2.0)
    e = residuals(res.line, d)
    np.testing.assert_allclose(res.weights, gm_weight(e), atol=1e-10)


def test_run_irls_accepts_custom_init():
    rng = np.random.default_rng(4)
    d = random_dataset(rng, 10)
    res = run_irls(d, init_weights=np.full(10, 0.5))
    assert res.converged
    with pytest.raises(ValueError, match="invalid weight"):
        run_irls(d, init_weights=np.zeros(10))


def test_run_irls_nonconvergence_flag():
    rng = np.random.default_rng(5)
    d = random_dataset(rng, 30)
    res = run_irls(d, IrlsConfig(max_iters=1, cost_tol=1e-16))
    assert not res.converged
    assert res.iterations == 1


def test_fixed_point_stationarity():
    rng = np.random.default_rng(6)
    for _ in range(10):
        d = random_dataset(rng, int(rng.integers(6, 25)), scale=2.0)
        res = run_irls(d, DEEP_IRLS)
        if not res.converged:
            continue
        theta = math.atan2(res.line.b, res.line.a)
        h = 1e-6
        g = (
            gm_cost_at_angle(d, theta + h, res.weights)
            - gm_cost_at_angle(d, theta - h, res.weights)
        ) / (2 * h)
        assert abs(g) <= 1e-6


def test_golden_fail_is_local_minimum(golden_fail):
    res = golden_fail["irls"]
    assert res.converged
    assert res.gm_cost_final > golden_fail["oracle_cost"] + 0.1
