import numpy as np
import pytest

from certline import (
    Dataset,
    LineParams,
    SdpSolution,
    alpha_from_residual,
    build_lifted,
    build_sdp,
    canonicalize,
    constraint_violations,
    extract_rank1,
    gm_cost,
    grid_search,
    lift_solution,
    lines_equal,
    residuals,
    run_irls,
    solve_sdp,
)
from certline.sdp import _affine_project, _clamp_psd, _pair_entry_indices

from conftest import DEEP_IRLS, random_dataset, random_line


def _make_solution(Q):
    w = np.linalg.eigvalsh(Q)
    return SdpSolution(
        Q=Q,
        cost=0.0,
        primal_residual=0.0,
        iterations=0,
        tightness_ratio=float(w[-2] / w[-1]),
        converged=True,
    )


def test_constraint_counts():
    rng = np.random.default_rng(0)
    for n, expected in ((2, 10), (10, 166)):
        d = random_dataset(rng, n)
        prob = build_sdp(build_lifted(d))
        assert prob.n_constraints == expected
    d = random_dataset(rng, 10)
    plain = build_sdp(build_lifted(d), redundant=False)
    assert plain.n_constraints == 31


def test_lifted_points_are_feasible():
    rng = np.random.default_rng(1)
    for _ in range(20):
        d = random_dataset(rng, int(rng.integers(2, 8)))
        line = random_line(rng)
        alpha = alpha_from_residual(residuals(line, d))
        q = lift_solution(line, alpha)
        prob = build_sdp(build_lifted(d))
        Q = np.outer(q.q, q.q)
        assert np.max(np.abs(constraint_violations(prob, Q))) <= 1e-12
        assert np.linalg.eigvalsh(Q)[0] >= -1e-12


def test_affine_projection_idempotent_and_feasible():
    rng = np.random.default_rng(2)
    d = random_dataset(rng, 5)
    prob = build_sdp(build_lifted(d))
    idx = _pair_entry_indices(prob)
    for _ in range(20):
        s = rng.normal(size=(prob.dim, prob.dim))
        Y = 0.5 * (s + s.T)
        P = _affine_project(Y, idx)
        assert np.max(np.abs(constraint_violations(prob, P))) <= 1e-12
        np.testing.assert_allclose(_affine_project(P, idx), P, atol=1e-13)
        # nearest-point property against an arbitrary feasible competitor
        s = rng.normal(size=Y.shape)
        W = _affine_project(0.5 * (s + s.T), idx)
        assert np.linalg.norm(P - Y, "fro") <= np.linalg.norm(W - Y, "fro") + 1e-12


def test_psd_clamp_idempotent_and_nonexpansive():
    rng = np.random.default_rng(3)
    for _ in range(30):
        s = rng.normal(size=(12, 12))
        A = 0.5 * (s + s.T)
        s = rng.normal(size=(12, 12))
        B = 0.5 * (s + s.T)
        PA, PB = _clamp_psd(A), _clamp_psd(B)
        assert np.linalg.eigvalsh(PA)[0] >= -1e-12
        np.testing.assert_allclose(_clamp_psd(PA), PA, atol=1e-12)
        assert (
            np.linalg.norm(PA - PB, "fro")
            <= np.linalg.norm(A - B, "fro") + 1e-10
        )


def test_solve_sdp_clean_collinear_tight():
    d = Dataset.from_points([(t, 0.5 * t + 1.0) for t in (-2.0, -1.0, 0.5, 2.0)])
    lp = build_lifted(d, eps=1e-6)
    sol = solve_sdp(build_sdp(lp))
    c = canonicalize(LineParams(-0.5, 1.0, 1.0)).c
    assert sol.converged
    assert sol.cost <= 1e-6 * c * c + 1e-6
    assert sol.tightness_ratio <= 1e-6
    _, line, alphas = extract_rank1(sol)
    assert lines_equal(line, LineParams(-0.5, 1.0, 1.0), tol=1e-3)
    assert np.all(alphas > 0.9)


def test_solve_sdp_matches_oracle_on_outlier_instance(golden_pass):
    d = golden_pass["dataset"]
    lp = build_lifted(d, eps=1e-6)
    sol = solve_sdp(build_sdp(lp), tol=1e-8)
    assert sol.converged
    assert sol.cost <= min(golden_pass["oracle_cost"], golden_pass["irls"].gm_cost_final) + 1e-5
    assert sol.tightness_ratio <= 1e-6
    _, line, alphas = extract_rank1(sol)
    assert lines_equal(line, golden_pass["oracle_line"], tol=1e-3)
    e = residuals(line, d)
    np.testing.assert_allclose(alphas, 1.0 / (1.0 + e * e), atol=1e-3)
    assert np.all(alphas > 0.0) and np.all(alphas <= 1.0 + 1e-9)


def test_solve_sdp_is_lower_bound():
    rng = np.random.default_rng(4)
    d = random_dataset(rng, 7)
    eps = 1e-6
    lp = build_lifted(d, eps=eps)
    sol = solve_sdp(build_sdp(lp), tol=1e-8)
    probes = [grid_search(d)[0], run_irls(d, DEEP_IRLS).line]
    probes += [random_line(rng) for _ in range(100)]
    for line in probes:
        bound = gm_cost(line, d) + eps * line.c**2
        assert sol.cost <= bound + 1e-6


def test_plain_relaxation_too_loose(golden_pass):
    d = golden_pass["dataset"]
    lp = build_lifted(d, eps=1e-6)
    sol = solve_sdp(build_sdp(lp, redundant=False), max_iters=10000)
    undercuts = sol.cost < golden_pass["oracle_cost"] - 1e-3
    not_rank1 = sol.tightness_ratio > 1e-2
    assert undercuts or not_rank1


def test_extract_rank1_exact():
    rng = np.random.default_rng(5)
    d = random_dataset(rng, 4)
    line = random_line(rng)
    alpha = alpha_from_residual(residuals(line, d))
    q = lift_solution(line, alpha)
    sol = _make_solution(np.outer(q.q, q.q))
    vec, got_line, got_alpha = extract_rank1(sol)
    np.testing.assert_allclose(np.abs(vec.q), np.abs(q.q), atol=1e-12)
    assert lines_equal(got_line, line, tol=1e-12)
    np.testing.assert_allclose(got_alpha, alpha, atol=1e-12)
    assert sol.tightness_ratio <= 1e-15


def test_extract_rank1_truncates_rank2():
    rng = np.random.default_rng(6)
    d = random_dataset(rng, 4)
    line = random_line(rng)
    alpha = alpha_from_residual(residuals(line, d))
    q = lift_solution(line, alpha)
    perp = rng.normal(size=q.q.shape)
    perp -= (perp @ q.q) / (q.q @ q.q) * q.q
    perp *= 0.05 / np.linalg.norm(perp)
    Q = np.outer(q.q, q.q) + np.outer(perp, perp)
    sol = _make_solution(Q)
    assert sol.tightness_ratio > 0.0
    _, got_line, _ = extract_rank1(sol)
    assert lines_equal(got_line, line, tol=1e-6)


def test_extract_rank1_degenerate():
    sol = _make_solution(np.zeros((6, 6)))
    with pytest.raises(ValueError, match="degenerate"):
        extract_rank1(sol)


def test_solve_sdp_validates_tol():
    rng = np.random.default_rng(7)
    prob = build_sdp(build_lifted(random_dataset(rng, 3)))
    with pytest.raises(ValueError):
        solve_sdp(prob, tol=0.0)
