import numpy as np
import pytest

from certline import (
    Dataset,
    LineParams,
    OracleConfig,
    canonicalize,
    gm_cost,
    grid_search,
    lines_equal,
)

from conftest import random_dataset


def test_collinear_recovery_within_grid_cell():
    d = Dataset.from_points([(t, 0.5 * t + 1.0) for t in np.linspace(-2, 2, 9)])
    line, cost = grid_search(d, OracleConfig(theta_steps=512, c_steps=512, polish=False))
    assert cost <= 0.05  # grid-resolution bound
    assert lines_equal(line, canonicalize(LineParams(-0.5, 1.0, 1.0)), tol=0.02)


def test_polish_reaches_exact_minimum_on_collinear():
    d = Dataset.from_points([(t, 0.5 * t + 1.0) for t in np.linspace(-2, 2, 9)])
    line, cost = grid_search(d, OracleConfig(theta_steps=256, c_steps=256))
    assert cost <= 1e-18


def test_grid_refinement_monotone():
    rng = np.random.default_rng(21)
    d = random_dataset(rng, 14)
    prev = np.inf
    for steps in (64, 128, 256, 512):
        _, cost = grid_search(
            d, OracleConfig(theta_steps=steps, c_steps=steps, polish=False)
        )
        assert cost <= prev + 1e-15
        prev = cost


def test_deterministic():
    rng = np.random.default_rng(22)
    d = random_dataset(rng, 10)
    cfg = OracleConfig(theta_steps=128, c_steps=128)
    l1, c1 = grid_search(d, cfg)
    l2, c2 = grid_search(d, cfg)
    assert (l1, c1) == (l2, c2)


def test_oracle_beats_every_probe_line():
    rng = np.random.default_rng(23)
    d = random_dataset(rng, 12)
    _, cost = grid_search(d)
    for _ in range(200):
        theta = rng.uniform(0, np.pi)
        c = rng.uniform(-5, 5)
        probe = canonicalize(LineParams(np.cos(theta), np.sin(theta), c))
        assert cost <= gm_cost(probe, d) + 1e-9


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(theta_steps=4)
    with pytest.raises(ValueError):
        OracleConfig(c_margin=0.0)
    with pytest.raises(ValueError, match="insufficient data"):
        grid_search(Dataset.from_points([(0, 0)]))
