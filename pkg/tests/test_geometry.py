import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from certline import (
    Dataset,
    LineParams,
    canonicalize,
    gm_cost,
    lines_equal,
    residual,
    residuals,
    tls_cost,
)

finite = st.floats(-50.0, 50.0, allow_nan=False, allow_infinity=False)


def test_residual_on_line():
    assert residual(LineParams(0, 1, 0), (3, 0)) == 0.0


def test_residual_substitution():
    assert residual(LineParams(1, 0, 1), (0, 2)) == -1.0


def test_residual_derived():
    assert residual(LineParams(0.6, 0.8, 1.0), (1, 1)) == pytest.approx(0.4, abs=1e-15)


def test_tls_cost_zero_on_line():
    d = Dataset.from_points([(0, 0), (5, 0)])
    assert tls_cost(LineParams(0, 1, 0), d) == 0.0


def test_tls_cost_unit_residuals():
    d = Dataset.from_points([(0, 1), (0, -1)])
    assert tls_cost(LineParams(0, 1, 0), d) == 1.0


def test_tls_cost_hand_value():
    # residuals at (0,1,1/3) are -1/3, -1/3, 2/3 -> mean square 2/9
    d = Dataset.from_points([(0, 0), (2, 0), (1, 1)])
    assert tls_cost(LineParams(0, 1, 1 / 3), d) == pytest.approx(2 / 9, abs=1e-15)


def test_tls_cost_empty_dataset():
    with pytest.raises(ValueError, match="empty dataset"):
        tls_cost(LineParams(0, 1, 0), Dataset.from_points([]))


def test_gm_cost_zero_on_line():
    d = Dataset.from_points([(0, 0), (1, 0.5), (2, 1)])
    line = canonicalize(LineParams(-0.5, 1, 0))
    assert gm_cost(line, d) == pytest.approx(0.0, abs=1e-30)


def test_gm_cost_single_unit_residual():
    d = Dataset.from_points([(0, 1)])
    assert gm_cost(LineParams(0, 1, 0), d) == pytest.approx(0.5, abs=1e-15)


def test_gm_cost_termwise():
    # residuals 1, 2, 3 against y = 0
    d = Dataset.from_points([(0, 1), (0, 2), (0, 3)])
    assert gm_cost(LineParams(0, 1, 0), d) == pytest.approx(2.2, abs=1e-12)


def test_canonicalize_sign_flip():
    assert canonicalize(LineParams(0, -1, 2)) == LineParams(0, 1, -2)


def test_canonicalize_normalization():
    line = canonicalize(LineParams(3, 4, 5))
    assert (line.a, line.b, line.c) == pytest.approx((0.6, 0.8, 1.0), abs=1e-15)


def test_canonicalize_b_zero_tiebreak():
    assert canonicalize(LineParams(-2, 0, 0)) == LineParams(1, 0, 0)


def test_canonicalize_degenerate():
    with pytest.raises(ValueError, match="degenerate normal"):
        canonicalize(LineParams(0, 0, 1))


@given(
    a=finite, b=finite, c=finite, s=finite,
    px=finite, py=finite,
)
def test_residual_scale_invariance(a, b, c, s, px, py):
    if math.hypot(a, b) < 1e-6 or abs(s) < 1e-6:
        return
    l1 = canonicalize(LineParams(a, b, c))
    l2 = canonicalize(LineParams(s * a, s * b, s * c))
    r1 = residual(l1, (px, py))
    r2 = residual(l2, (px, py))
    assert r1 == pytest.approx(r2, abs=1e-12 * (1 + abs(px) + abs(py)))


def test_gm_cost_even_under_sign_flip():
    rng = np.random.default_rng(7)
    d = Dataset(rng.normal(size=12), rng.normal(size=12))
    line = canonicalize(LineParams(0.3, -0.8, 1.2))
    flipped = LineParams(-line.a, -line.b, -line.c)
    assert gm_cost(line, d) == pytest.approx(gm_cost(flipped, d), abs=1e-14)


def test_cost_bounds():
    rng = np.random.default_rng(11)
    d = Dataset(rng.uniform(-5, 5, 30), rng.uniform(-5, 5, 30))
    for _ in range(50):
        theta = rng.uniform(0, np.pi)
        line = canonicalize(LineParams(np.cos(theta), np.sin(theta), rng.uniform(-5, 5)))
        assert 0.0 <= gm_cost(line, d) < d.n
        assert tls_cost(line, d) >= 0.0


def test_residuals_vector_matches_pointwise():
    rng = np.random.default_rng(3)
    d = Dataset(rng.normal(size=9), rng.normal(size=9))
    line = canonicalize(LineParams(1.0, 2.0, -0.5))
    vec = residuals(line, d)
    assert vec.shape == (9,)
    for k, p in enumerate(d.points):
        assert vec[k] == pytest.approx(residual(line, p), abs=1e-15)


def test_dataset_rejects_nonfinite():
    with pytest.raises(ValueError, match="non-finite"):
        Dataset(np.array([0.0, np.nan]), np.array([0.0, 1.0]))


def test_lines_equal_handles_angle_wrap():
    l1 = canonicalize(LineParams(1.0, 1e-12, 0.7))
    l2 = canonicalize(LineParams(-1.0, 1e-12, -0.7))
    assert lines_equal(l1, l2, tol=1e-9)
    assert not lines_equal(l1, canonicalize(LineParams(1.0, 0.1, 0.7)), tol=1e-3)
