"""Relaxed SDP over the lifted outer product, with redundant constraints.

Replacing q q^T by a PSD matrix Q relaxes the lifted problem to

    min tr(Q H)   s.t.  tr(Q_00 J) = 1,   Q_nm = Q_nm^T for n > m >= 0,
                        Q >= 0.

The block-symmetry constraints for all pairs (not just against block 0)
are redundant in the original variables but tighten the relaxation enough
to recover rank-1 solutions in practice; the looser variant with only the
(n, 0) constraints is kept behind a flag as a negative control.

The solver is plain operator splitting (ADMM): the affine constraints have
mutually orthogonal gradients, so projecting onto the affine set reduces to
symmetrizing the constrained blocks and recentering the trace; the PSD side
is a spectral clamp.  No external solver is involved, which keeps the
supported problem size modest (N <= 25 enforced at the CLI).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import LineParams, canonicalize
from .lifting import J, LiftedProblem, LiftedVector, pair_blocks

# component pairs of a 3x3 block whose symmetry is constrained
_SKEW_IJ = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True, eq=False)
class SdpProblem:
    H: np.ndarray
    dim: int
    n_points: int
    pairs: tuple
    redundant: bool

    @property
    def n_constraints(self) -> int:
        return 1 + 3 * len(self.pairs)


@dataclass(frozen=True, eq=False)
class SdpSolution:
    Q: np.ndarray
    cost: float
    primal_residual: float
    iterations: int
    tightness_ratio: float
    converged: bool


def build_sdp(lp: LiftedProblem, redundant: bool = True) -> SdpProblem:
    """Constraint set for the relaxation; ``redundant=False`` keeps only the
    block-0 symmetry constraints (the ill-posed plain relaxation)."""
    if redundant:
        pairs = tuple(pair_blocks(lp.n_points))
    else:
        pairs = tuple((n, 0) for n in range(1, lp.n_points + 1))
    return SdpProblem(
        H=lp.H,
        dim=lp.dim,
        n_points=lp.n_points,
        pairs=pairs,
        redundant=redundant,
    )


def _pair_entry_indices(problem: SdpProblem):
    """Flat indices of the entry pairs tied by each scalar symmetry constraint.

    Constraint k forces Q[r1, c1] == Q[r2, c2]; by symmetry of Q the
    transposed entries move along, giving four flat positions per scalar
    constraint.
    """
    dim = problem.dim
    i1, i2, t1, t2 = [], [], [], []
    for (n, m) in problem.pairs:
        rn, cm = 3 * n, 3 * m
        for (i, j) in _SKEW_IJ:
            r1, c1 = rn + i, cm + j
            r2, c2 = rn + j, cm + i
            i1.append(r1 * dim + c1)
            i2.append(r2 * dim + c2)
            t1.append(c1 * dim + r1)
            t2.append(c2 * dim + r2)
    return (
        np.asarray(i1, dtype=np.intp),
        np.asarray(i2, dtype=np.intp),
        np.asarray(t1, dtype=np.intp),
        np.asarray(t2, dtype=np.intp),
    )


def _affine_project(Y: np.ndarray, idx) -> np.ndarray:
    """Exact Euclidean projection onto the affine constraint set.

    The constraint gradients are mutually orthogonal: the trace constraint
    touches two diagonal entries and each symmetry constraint its own
    quadruple of off-diagonal entries, so the projection splits into a trace
    recenter plus per-block symmetrization.  Y must be symmetric.
    """
    i1, i2, t1, t2 = idx
    out = Y.copy()
    shift = 0.5 * (out[0, 0] + out[1, 1] - 1.0)
    out[0, 0] -= shift
    out[1, 1] -= shift
    flat = out.ravel()
    avg = 0.5 * (flat[i1] + flat[i2])
    flat[i1] = avg
    flat[i2] = avg
    flat[t1] = avg
    flat[t2] = avg
    return out


def _clamp_psd(S: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(S)
    if w[0] >= 0.0:
        return S
    P = (V * np.maximum(w, 0.0)) @ V.T
    return 0.5 * (P + P.T)


def constraint_violations(problem: SdpProblem, Q: np.ndarray) -> np.ndarray:
    """Per-constraint residuals tr(A_k Q) - b_k, trace constraint first."""
    vals = [Q[0, 0] + Q[1, 1] - 1.0]
    for (n, m) in problem.pairs:
        rn, cm = 3 * n, 3 * m
        for (i, j) in _SKEW_IJ:
            vals.append(Q[rn + i, cm + j] - Q[rn + j, cm + i])
    return np.asarray(vals)


def solve_sdp(
    problem: SdpProblem,
    tol: float = 1e-7,
    max_iters: int = 100000,
    over_relax: float = 1.5,
    rho: float | None = None,
) -> SdpSolution:
    """ADMM splitting between the affine set and the PSD cone.

    The objective enters through a gradient step folded into the affine
    projection.  Stops when scaled primal and dual residuals both drop
    below ``tol``; hitting ``max_iters`` flags the result as non-converged
    instead of raising.  The penalty parameter is rebalanced from the
    residual ratio every 100 iterations.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    H = problem.H
    dim = problem.dim
    if rho is None:
        rho = max(1.0, float(np.linalg.norm(H, "fro")) / dim)
    idx = _pair_entry_indices(problem)

    Z = np.zeros((dim, dim))
    U = np.zeros((dim, dim))
    H_rho = H / rho
    converged = False
    iterations = max_iters
    best_score = np.inf
    best_Q = Z
    r_prim = r_dual = np.inf

    for k in range(1, max_iters + 1):
        X = _affine_project(Z - U - H_rho, idx)
        Xr = over_relax * X + (1.0 - over_relax) * Z
        V = Xr + U
        Z_new = _clamp_psd(0.5 * (V + V.T))
        U = U + Xr - Z_new
        r_prim = float(np.linalg.norm(X - Z_new, "fro"))
        r_dual = rho * float(np.linalg.norm(Z_new - Z, "fro"))
        Z = Z_new

        eps_pri = tol * max(
            1.0, float(np.linalg.norm(X, "fro")), float(np.linalg.norm(Z, "fro"))
        )
        eps_dual = tol * max(1.0, rho * float(np.linalg.norm(U, "fro")))
        score = max(r_prim / eps_pri, r_dual / eps_dual)
        if score < best_score:
            best_score = score
            best_Q = Z
        if r_prim <= eps_pri and r_dual <= eps_dual:
            converged = True
            iterations = k
            break
        if k % 100 == 0:
            if r_prim > 10.0 * r_dual:
                rho *= 2.0
                U /= 2.0
                H_rho = H / rho
            elif r_dual > 10.0 * r_prim:
                rho /= 2.0
                U *= 2.0
                H_rho = H / rho

    Q = Z if converged else best_Q
    cost = float(np.sum(Q * H))
    primal_residual = float(np.linalg.norm(constraint_violations(problem, Q)))
    w = np.linalg.eigvalsh(Q)
    lam1 = float(w[-1])
    lam2 = float(w[-2]) if dim >= 2 else 0.0
    ratio = lam2 / lam1 if lam1 > 0.0 else float("inf")
    return SdpSolution(
        Q=Q,
        cost=cost,
        primal_residual=primal_residual,
        iterations=iterations,
        tightness_ratio=ratio,
        converged=converged,
    )


def extract_rank1(sol: SdpSolution):
    """Rank-1 truncation of the SDP solution.

    Returns the dominant lifted vector, its canonical line, and the
    recovered confidences alpha_n = q_n^T J q_0.  The tightness ratio on
    the solution tells the caller how trustworthy the truncation is.
    """
    w, V = np.linalg.eigh(sol.Q)
    lam1 = float(w[-1])
    if lam1 <= 0.0:
        raise ValueError("degenerate SDP solution")
    q = np.sqrt(lam1) * V[:, -1]
    a, b = q[0], q[1]
    if b < 0.0 or (b == 0.0 and a < 0.0):
        q = -q
    if q[0] == 0.0 and q[1] == 0.0:
        raise ValueError("degenerate SDP solution")
    line = canonicalize(LineParams(float(q[0]), float(q[1]), float(q[2])))
    n_pts = sol.Q.shape[0] // 3 - 1
    q0 = q[:3]
    blocks = q[3:].reshape(n_pts, 3)
    alphas = blocks @ (J @ q0)
    return LiftedVector(q), line, alphas
