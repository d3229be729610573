"""Closed-form (weighted) total least squares.

The pipeline is: accumulate weighted moments, center the second moment on
the weighted centroid, and read the line normal off the minimum eigenvector
of the resulting 2x2 covariance.  The offset follows as the projection of
the centroid onto the normal.  The optimal cost equals the minimum
eigenvalue, which doubles as a duality-gap check, and the same 2x2 problem
is solved once more as a tiny trace-minimization SDP for a cross-check of
the whole chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geometry import Dataset, LineParams, canonicalize, tls_cost


@dataclass(frozen=True, eq=False)
class MomentSummary:
    """Weighted moments, normalized by the total weight.

    ``b_centroid`` is the weighted mean point, ``A`` the weighted second
    moment about the origin, and ``D = A - outer(b, b)`` the covariance
    about the centroid.  With unit weights ``w_total`` equals the point
    count and everything reduces to plain 1/N averages.
    """

    b_centroid: np.ndarray
    A: np.ndarray
    w_total: float
    D: np.ndarray


class Eig2(NamedTuple):
    lambda_min: float
    lambda_max: float
    v_min: np.ndarray
    v_max: np.ndarray


@dataclass(frozen=True, eq=False)
class TlsSolution:
    line: LineParams
    p_star: float
    lambda_min: float
    lambda_max: float
    eigvec_min: np.ndarray


@dataclass(frozen=True, eq=False)
class TlsSdpSolution:
    N_mat: np.ndarray
    cost: float
    rank1_defect: float


def moments(d: Dataset, weights=None) -> MomentSummary:
    """Weighted moment summary of a dataset.

    Raw weighted sums are accumulated first and divided once by the total
    weight, so the unit-weight and weighted paths share one code path.
    Raises ValueError for fewer than two points or nonpositive weights.
    """
    if d.n < 2:
        raise ValueError("insufficient data")
    if weights is None:
        w = np.ones(d.n)
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (d.n,):
            raise ValueError("invalid weight")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("invalid weight")
    x, y = d.x, d.y
    w_total = float(np.sum(w))
    b = np.array([float(w @ x), float(w @ y)]) / w_total
    sxx = float(w @ (x * x))
    sxy = float(w @ (x * y))
    syy = float(w @ (y * y))
    A = np.array([[sxx, sxy], [sxy, syy]]) / w_total
    D = A - np.outer(b, b)
    D = 0.5 * (D + D.T)
    return MomentSummary(b_centroid=b, A=A, w_total=w_total, D=D)


def _fix_sign(v: np.ndarray) -> np.ndarray:
    if v[0] < 0.0 or (v[0] == 0.0 and v[1] < 0.0):
        v = -v
    return v + 0.0


def eig2_sym(m) -> Eig2:
    """Closed-form eigendecomposition of a symmetric 2x2 matrix.

    Uses the trace/determinant formula; eigenvectors are unit length,
    mutually orthogonal, and sign-fixed so the first nonzero component is
    positive.  An isotropic matrix ties; the tie-break returns (1, 0).
    """
    m = np.asarray(m, dtype=np.float64)
    a = float(m[0, 0])
    d = float(m[1, 1])
    b = 0.5 * (float(m[0, 1]) + float(m[1, 0]))
    mean = 0.5 * (a + d)
    half_gap = 0.5 * (a - d)
    disc = math.hypot(half_gap, b)
    lo = mean - disc
    hi = mean + disc
    if disc == 0.0:
        v_min = np.array([1.0, 0.0])
    else:
        u1 = np.array([b, lo - a])
        u2 = np.array([lo - d, b])
        u = u1 if float(u1 @ u1) >= float(u2 @ u2) else u2
        nrm = float(np.linalg.norm(u))
        if nrm == 0.0:
            v_min = np.array([1.0, 0.0])
        else:
            v_min = _fix_sign(u / nrm)
    v_max = _fix_sign(np.array([-v_min[1], v_min[0]]))
    return Eig2(lo, hi, v_min, v_max)


def solve_tls(d: Dataset, weights=None) -> TlsSolution:
    """Fit a line by (weighted) total least squares.

    The normal is the minimum eigenvector of the centered covariance; the
    offset is the projection of the weighted centroid onto the normal.  The
    optimal cost p* equals the minimum eigenvalue (the weighted mean squared
    residual).
    """
    m = moments(d, weights)
    eig = eig2_sym(m.D)
    n = eig.v_min
    c = float(m.b_centroid @ n)
    line = canonicalize(LineParams(float(n[0]), float(n[1]), c))
    return TlsSolution(
        line=line,
        p_star=eig.lambda_min,
        lambda_min=eig.lambda_min,
        lambda_max=eig.lambda_max,
        eigvec_min=eig.v_min,
    )


def duality_gap(d: Dataset) -> float:
    """Primal cost of the fitted line minus the dual value lambda_min(D).

    Strong duality makes this (numerically) zero; the primal side is
    re-evaluated from the residuals rather than read off the eigensolve so
    the check exercises the whole pipeline.
    """
    sol = solve_tls(d)
    return tls_cost(sol.line, d) - sol.lambda_min


def solve_tls_sdp(D) -> TlsSdpSolution:
    """Solve min tr(N D) s.t. tr(N) = 1, N >= 0 for a 2x2 PSD matrix D.

    The minimizer is the rank-1 outer product of the minimum eigenvector,
    so the 2x2 SDP is solved exactly in closed form.  ``rank1_defect`` is
    the second (smaller) eigenvalue of the returned N.
    """
    D = np.asarray(D, dtype=np.float64)
    eig = eig2_sym(D)
    N_mat = np.outer(eig.v_min, eig.v_min)
    cost = float(eig.v_min @ D @ eig.v_min)
    defect = eig2_sym(N_mat).lambda_min
    return TlsSdpSolution(N_mat=N_mat, cost=cost, rank1_defect=defect)
