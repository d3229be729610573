"""Hot numeric kernels: numba-jitted loops with a pure-numpy fallback.

The implementation is chosen once, at import time, from the
``CERTLINE_KERNELS`` environment variable:

* ``auto``  (default) -- use numba when it imports cleanly, else numpy.
* ``numba`` -- require numba; raise if it is unavailable.
* ``numpy`` -- force the pure-numpy path.

Both variants of every kernel stay importable (``*_numpy`` / ``*_numba``,
the latter ``None`` without numba) so the benchmark and the cross-check
tests can compare them regardless of the active backend.

All kernels expect contiguous float64 arrays.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "BACKEND",
    "gm_cost_points",
    "gm_costs_for_lines",
    "gm_grid_scan",
    "warmup",
]


def gm_cost_points_numpy(x, y, a, b, c):
    """Geman-McClure cost sum(e^2 / (1 + e^2)) of residuals e = a*x + b*y - c."""
    e = a * x + b * y - c
    e2 = e * e
    return float(np.sum(e2 / (1.0 + e2)))


def gm_costs_for_lines_numpy(x, y, abc):
    """GM cost of every line in ``abc`` (rows (a, b, c)) on the same points."""
    e = abc[:, :1] * x + abc[:, 1:2] * y - abc[:, 2:]
    e2 = e * e
    return np.sum(e2 / (1.0 + e2), axis=1)


def gm_grid_scan_numpy(x, y, cos_t, sin_t, c_grid):
    """Scan the (theta, c) grid for the lowest GM cost.

    Returns ``(best_cost, theta_index, c_index)``.  Ties resolve to the
    lexicographically smallest (theta_index, c_index), which keeps the scan
    deterministic however it is partitioned.
    """
    best_cost = np.inf
    best_it = -1
    best_ic = -1
    for it in range(cos_t.shape[0]):
        proj = cos_t[it] * x + sin_t[it] * y
        e = proj - c_grid[:, None]
        e2 = e * e
        costs = np.sum(e2 / (1.0 + e2), axis=1)
        ic = int(np.argmin(costs))
        if costs[ic] < best_cost:
            best_cost = float(costs[ic])
            best_it = it
            best_ic = ic
    return best_cost, best_it, best_ic


def _make_numba_kernels():
    import numba

    @numba.njit(cache=True)
    def gm_cost_points_nb(x, y, a, b, c):
        total = 0.0
        for k in range(x.shape[0]):
            e = a * x[k] + b * y[k] - c
            e2 = e * e
            total += e2 / (1.0 + e2)
        return total

    @numba.njit(cache=True)
    def gm_costs_for_lines_nb(x, y, abc):
        out = np.empty(abc.shape[0])
        for i in range(abc.shape[0]):
            a = abc[i, 0]
            b = abc[i, 1]
            c = abc[i, 2]
            total = 0.0
            for k in range(x.shape[0]):
                e = a * x[k] + b * y[k] - c
                e2 = e * e
                total += e2 / (1.0 + e2)
            out[i] = total
        return out

    @numba.njit(cache=True)
    def gm_grid_scan_nb(x, y, cos_t, sin_t, c_grid):
        n = x.shape[0]
        proj = np.empty(n)
        best_cost = np.inf
        best_it = -1
        best_ic = -1
        for it in range(cos_t.shape[0]):
            ct = cos_t[it]
            st = sin_t[it]
            for k in range(n):
                proj[k] = ct * x[k] + st * y[k]
            for ic in range(c_grid.shape[0]):
                c = c_grid[ic]
                cost = 0.0
                for k in range(n):
                    e = proj[k] - c
                    e2 = e * e
                    cost += e2 / (1.0 + e2)
                if cost < best_cost:
                    best_cost = cost
                    best_it = it
                    best_ic = ic
        return best_cost, best_it, best_ic

    return gm_cost_points_nb, gm_costs_for_lines_nb, gm_grid_scan_nb


_choice = os.environ.get("CERTLINE_KERNELS", "auto").strip().lower()
if _choice not in {"auto", "numba", "numpy"}:
    raise ValueError(
        f"CERTLINE_KERNELS must be one of auto|numba|numpy, got {_choice!r}"
    )

gm_cost_points_numba = None
gm_costs_for_lines_numba = None
gm_grid_scan_numba = None

if _choice in {"auto", "numba"}:
    try:
        (
            gm_cost_points_numba,
            gm_costs_for_lines_numba,
            gm_grid_scan_numba,
        ) = _make_numba_kernels()
        BACKEND = "numba"
    except ImportError:
        if _choice == "numba":
            raise
        BACKEND = "numpy"
else:
    BACKEND = "numpy"

if BACKEND == "numba":
    gm_cost_points = gm_cost_points_numba
    gm_costs_for_lines = gm_costs_for_lines_numba
    gm_grid_scan = gm_grid_scan_numba
else:
    gm_cost_points = gm_cost_points_numpy
    gm_costs_for_lines = gm_costs_for_lines_numpy
    gm_grid_scan = gm_grid_scan_numpy


def warmup():
    """Trigger JIT compilation of every kernel (no-op on the numpy backend)."""
    x = np.array([0.0, 1.0])
    y = np.array([1.0, 0.5])
    gm_cost_points(x, y, 1.0, 0.0, 0.25)
    gm_costs_for_lines(x, y, np.array([[1.0, 0.0, 0.25]]))
    gm_grid_scan(x, y, np.array([1.0]), np.array([0.0]), np.array([0.0, 0.5]))
