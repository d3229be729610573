"""Lifting of the robust cost into a stacked quadratic form.

The GM objective is rewritten with one confidence variable per point,
alpha_n in (0, 1], and the joint problem over (line, alphas) becomes a
quadratic form q^T H q in the stacked vector q = (q_0, q_1, ..., q_N) with
q_0 = (a, b, c) and q_n = alpha_n * q_0.  H is an arrowhead matrix: the
only off-diagonal blocks sit in the first block row/column.  The all-zero
third column of H is regularized by a small eps at the (c, c) entry of
block (0, 0), which acts as a prior keeping the line near the origin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Dataset, LineParams

# selector picking out the (a, b) part of a 3-vector
J = np.diag([1.0, 1.0, 0.0])
J.setflags(write=False)


@dataclass(frozen=True, eq=False)
class LiftedProblem:
    """Arrowhead cost matrix H with its data vectors d_n = (x_n, y_n, -1)."""

    H: np.ndarray
    d_list: np.ndarray
    eps: float
    n_points: int

    @property
    def dim(self) -> int:
        return 3 * (self.n_points + 1)


@dataclass(frozen=True, eq=False)
class LiftedVector:
    """Stacked vector of 3-blocks q_0 ... q_N."""

    q: np.ndarray

    def __post_init__(self):
        q = np.ascontiguousarray(self.q, dtype=np.float64)
        if q.ndim != 1 or q.shape[0] % 3 != 0 or q.shape[0] < 3:
            raise ValueError("lifted vector length must be a positive multiple of 3")
        object.__setattr__(self, "q", q)

    @property
    def n_blocks(self) -> int:
        return self.q.shape[0] // 3

    def block(self, i: int) -> np.ndarray:
        return self.q[3 * i : 3 * i + 3]


def pair_blocks(n_points: int) -> list[tuple[int, int]]:
    """Block pairs (n, m) with n > m >= 0 in multiplier stacking order.

    The order is m-major: (1,0), (2,0), ..., (N,0), (2,1), (3,1), ...
    """
    return [
        (n, m)
        for m in range(n_points + 1)
        for n in range(m + 1, n_points + 1)
    ]


def alpha_from_residual(e):
    """Optimal confidence 1 / (1 + e^2) for a residual; lies in (0, 1]."""
    a = 1.0 / (1.0 + np.square(e))
    return float(a) if np.isscalar(e) else a


def build_lifted(d: Dataset, eps: float = 1e-6) -> LiftedProblem:
    """Assemble the arrowhead matrix H and the data vectors.

    Block (0,0) is N*J plus eps at its (3,3) entry; block (0,n) is -J and
    block (n,n) is J + d_n d_n^T.
    """
    if d.n < 1:
        raise ValueError("empty dataset")
    if eps < 0.0:
        raise ValueError("eps must be nonnegative")
    n = d.n
    dim = 3 * (n + 1)
    d_list = np.column_stack([d.x, d.y, -np.ones(n)])
    H = np.zeros((dim, dim))
    H[:3, :3] = n * J
    H[2, 2] = eps
    for k in range(1, n + 1):
        r = 3 * k
        dk = d_list[k - 1]
        H[r : r + 3, r : r + 3] = J + np.outer(dk, dk)
        H[:3, r : r + 3] = -J
        H[r : r + 3, :3] = -J
    return LiftedProblem(H=H, d_list=d_list, eps=float(eps), n_points=n)


def lift_solution(line: LineParams, alpha) -> LiftedVector:
    """Stack q_0 = (a, b, c) and q_n = alpha_n * q_0."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=np.float64))
    q0 = np.array([line.a, line.b, line.c], dtype=np.float64)
    q = np.concatenate([q0, (alpha[:, None] * q0[None, :]).ravel()])
    return LiftedVector(q)


def lifted_cost(q, lp: LiftedProblem) -> float:
    """Quadratic cost q^T H q (includes the eps * c^2 prior when eps > 0)."""
    vec = q.q if isinstance(q, LiftedVector) else np.asarray(q, dtype=np.float64)
    if vec.shape[0] != lp.H.shape[0]:
        raise ValueError("dimension mismatch")
    return float(vec @ lp.H @ vec)
