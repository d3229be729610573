"""Brute-force global reference for the robust cost.

The line space is two-dimensional after canonicalization: normal angle
theta in [0, pi) and offset c.  A dense, deterministic scan of that grid
(optionally polished by an IRLS run seeded from the best cell) gives an
independent global-minimum estimate used to label IRLS outcomes and to
sanity-check the SDP and certificate results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry import Dataset, LineParams, canonicalize, gm_cost, residuals
from .irls import IrlsConfig, gm_weight, run_irls


@dataclass(frozen=True)
class OracleConfig:
    theta_steps: int = 2048
    c_steps: int = 2048
    c_margin: float = 1.5
    polish: bool = True

    def __post_init__(self):
        if self.theta_steps < 8 or self.c_steps < 8:
            raise ValueError("grid must have at least 8 steps per axis")
        if self.c_margin <= 0.0:
            raise ValueError("c_margin must be positive")


def grid_search(d: Dataset, cfg: OracleConfig | None = None) -> tuple[LineParams, float]:
    """Best line on the (theta, c) grid, optionally IRLS-polished.

    Both grids nest under doubling (theta_j = j*pi/S, c_j = -r + 2r*j/S), so
    refining the grid never worsens the result.  Ties resolve to the lowest
    (theta index, c index), making the scan deterministic regardless of how
    it might be partitioned.
    """
    cfg = cfg or OracleConfig()
    if d.n < 2:
        raise ValueError("insufficient data")
    thetas = np.arange(cfg.theta_steps) * (math.pi / cfg.theta_steps)
    radius = cfg.c_margin * float(np.max(np.hypot(d.x, d.y)))
    cs = -radius + (2.0 * radius / cfg.c_steps) * np.arange(cfg.c_steps)
    _, it, ic = kernels.gm_grid_scan(d.x, d.y, np.cos(thetas), np.sin(thetas), cs)
    line = canonicalize(
        LineParams(math.cos(thetas[it]), math.sin(thetas[it]), float(cs[ic]))
    )
    best_cost = gm_cost(line, d)
    if cfg.polish:
        w0 = np.maximum(gm_weight(residuals(line, d)), 1e-12)
        res = run_irls(
            d, IrlsConfig(max_iters=300, cost_tol=1e-14), init_weights=w0
        )
        if res.gm_cost_final < best_cost:
            return res.line, float(res.gm_cost_final)
    return line, float(best_cost)
