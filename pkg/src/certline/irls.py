"""Geman-McClure M-estimation by iteratively reweighted least squares.

Each sweep solves a weighted TLS problem with weights frozen from the
previous residuals, then recomputes the weights w = 2 / (1 + e^2)^2.  The
iteration stops when the robust cost change drops below the configured
tolerance.  Descent is not guaranteed for this scheme, so the full
(cost, line) trace is recorded instead of asserting monotonicity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Dataset, LineParams, gm_cost, residuals
from .geometry import canonicalize as canonicalize_line
from .tls import solve_tls


@dataclass(frozen=True)
class IrlsConfig:
    max_iters: int = 100
    cost_tol: float = 1e-10
    # keeps the weighted moment matrix well-posed when a residual is enormous
    weight_floor: float = 1e-12

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.cost_tol > 0.0:
            raise ValueError("cost_tol must be positive")
        if self.weight_floor < 0.0:
            raise ValueError("weight_floor must be nonnegative")


@dataclass(eq=False)
class IrlsResult:
    line: LineParams
    weights: np.ndarray
    gm_cost_final: float
    trace: list = field(default_factory=list)
    converged: bool = False
    iterations: int = 0


def gm_weight(e):
    """IRLS weight 2 / (1 + e^2)^2 matching the GM first-order conditions.

    Even in e, with range (0, 2]; accepts scalars or arrays.
    """
    e2 = np.square(e)
    w = 2.0 / np.square(1.0 + e2)
    return float(w) if np.isscalar(e) else w


def irls_step(d: Dataset, weights) -> tuple[LineParams, float]:
    """One weighted TLS solve; returns the line and its robust cost."""
    sol = solve_tls(d, weights)
    return sol.line, gm_cost(sol.line, d)


def newton_polish(d: Dataset, line: LineParams, max_iters: int = 30) -> LineParams:
    """Sharpen a near-stationary line to a machine-precision GM stationary point.

    IRLS stops once the cost change quantizes to zero, which can leave the
    gradient near sqrt(ulp * curvature) ~ 1e-7.  Certificate construction
    wants the first-order conditions much tighter than that, so this runs
    damped Newton steps on (theta, c) with analytic derivatives.  Returns
    the polished line (canonical); never moves to a point with higher cost.
    """
    import math

    line = canonicalize_line(line)
    theta = math.atan2(line.b, line.a)
    c = line.c

    def grad_hess(theta, c):
        ct, st = math.cos(theta), math.sin(theta)
        e = ct * d.x + st * d.y - c
        et = -st * d.x + ct * d.y
        e2 = e * e
        rho1 = 2.0 * e / np.square(1.0 + e2)
        rho2 = (2.0 - 6.0 * e2) / (1.0 + e2) ** 3
        g = np.array([float(rho1 @ et), float(-np.sum(rho1))])
        h_tt = float(rho2 @ (et * et)) - float(rho1 @ (e + c))
        h_tc = float(-(rho2 @ et))
        h_cc = float(np.sum(rho2))
        return g, np.array([[h_tt, h_tc], [h_tc, h_cc]])

    def cost(theta, c):
        ct, st = math.cos(theta), math.sin(theta)
        return gm_cost(LineParams(ct, st, c), d)

    best = cost(theta, c)
    for _ in range(max_iters):
        g, h = grad_hess(theta, c)
        if float(np.linalg.norm(g)) <= 1e-14 * (1.0 + abs(best)):
            break
        try:
            step = np.linalg.solve(h, -g)
        except np.linalg.LinAlgError:
            break
        scale = 1.0
        moved = False
        for _ in range(30):
            t_new, c_new = theta + scale * step[0], c + scale * step[1]
            f_new = cost(t_new, c_new)
            if f_new <= best:
                theta, c, best = t_new, c_new, f_new
                moved = True
                break
            scale *= 0.5
        if not moved:
            break
    return canonicalize_line(LineParams(math.cos(theta), math.sin(theta), c))


def run_irls(d: Dataset, cfg: IrlsConfig | None = None, init_weights=None) -> IrlsResult:
    """Iterate weighted solves until the GM cost stalls or max_iters.

    Weights start at 1 unless ``init_weights`` is given (all entries must be
    positive).  Non-convergence is reported through the flag, not an error.
    The stored weights are recomputed from the final residuals, so at a
    fixed point they satisfy w_n = gm_weight(e_n) exactly.
    """
    cfg = cfg or IrlsConfig()
    if init_weights is None:
        w = np.ones(d.n)
    else:
        w = np.asarray(init_weights, dtype=np.float64)
        if w.shape != (d.n,) or not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("invalid weight")
        w = np.maximum(w, cfg.weight_floor)

    trace: list = []
    prev_cost = np.inf
    converged = False
    line = None
    cost = np.inf
    iterations = 0
    for iterations in range(1, cfg.max_iters + 1):
        line, cost = irls_step(d, w)
        trace.append((cost, line))
        if abs(cost - prev_cost) < cfg.cost_tol:
            converged = True
            break
        prev_cost = cost
        w = np.maximum(gm_weight(residuals(line, d)), cfg.weight_floor)

    final_w = np.maximum(gm_weight(residuals(line, d)), cfg.weight_floor)
    return IrlsResult(
        line=line,
        weights=final_w,
        gm_cost_final=cost,
        trace=trace,
        converged=converged,
        iterations=iterations,
    )
