"""Post-hoc global-optimality certificate via Douglas-Rachford splitting.

Given a candidate line, a certificate exists when some Lagrangian Hessian
K is simultaneously (a) positive semidefinite and (b) a member of the
affine subspace of matrices with the required multiplier structure that
also satisfy the stationarity condition K q = 0 at the lifted candidate q.
Douglas-Rachford splitting alternates reflected projections between the
two sets; convergence (minimum eigenvalue of the subspace-projected
iterate reaching ~0) certifies the candidate.  Failure to converge proves
nothing: the test is sufficient, not necessary.

Matrix bookkeeping: with the candidate cost lam fixed as the multiplier of
the unit-normal constraint, K = M - Gamma where M is the arrowhead matrix
H (eps included) with lam * J subtracted from block (0, 0), and Gamma
collects the pair multipliers gamma_nm as cross-product blocks (gamma^x
below the diagonal, transposes above, zero diagonal blocks).  The
stationarity condition rearranges to the linear system R gamma = M q where
R depends only on q, assembled from the identity u^x v = -v^x u.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .geometry import Dataset, LineParams, canonicalize, residuals
from .lifting import (
    LiftedVector,
    alpha_from_residual,
    build_lifted,
    lift_solution,
    lifted_cost,
    pair_blocks,
)


def cross_matrix(u) -> np.ndarray:
    """Skew-symmetric matrix u^x with u^x v = u x v."""
    u = np.asarray(u, dtype=np.float64)
    return np.array(
        [
            [0.0, -u[2], u[1]],
            [u[2], 0.0, -u[0]],
            [-u[1], u[0], 0.0],
        ]
    )


@lru_cache(maxsize=None)
def _gamma_entry_indices(n_points: int):
    """Flat positions of the cross-matrix entries in the lower block triangle.

    For each pair, positions E1 carry (+u1, +u2, +u3) and E2 the negated
    mirror entries within the same 3x3 block, in multiplier stacking order.
    """
    dim = 3 * (n_points + 1)
    e1, e2 = [], []
    for (n, m) in pair_blocks(n_points):
        rn, cm = 3 * n, 3 * m
        e1 += [(rn + 2) * dim + cm + 1, rn * dim + cm + 2, (rn + 1) * dim + cm]
        e2 += [(rn + 1) * dim + cm + 2, (rn + 2) * dim + cm, rn * dim + cm + 1]
    return np.asarray(e1, dtype=np.intp), np.asarray(e2, dtype=np.intp)


@dataclass(frozen=True, eq=False)
class GammaMultipliers:
    """Stacked pair multipliers gamma_nm (n > m >= 0), 3 entries per pair."""

    gamma: np.ndarray
    n_points: int

    def __post_init__(self):
        g = np.ascontiguousarray(self.gamma, dtype=np.float64)
        p = (self.n_points + 1) * self.n_points // 2
        if g.shape != (3 * p,):
            raise ValueError("gamma length inconsistent with point count")
        object.__setattr__(self, "gamma", g)

    @property
    def count(self) -> int:
        return self.gamma.shape[0] // 3

    def vector(self, n: int, m: int) -> np.ndarray:
        g = pair_blocks(self.n_points).index((n, m))
        return self.gamma[3 * g : 3 * g + 3]


def gamma_to_Gamma(g, n_points: int) -> np.ndarray:
    """Assemble the full multiplier matrix from stacked gamma vectors."""
    flat = g.gamma if isinstance(g, GammaMultipliers) else np.asarray(g, np.float64)
    p = (n_points + 1) * n_points // 2
    if flat.shape != (3 * p,):
        raise ValueError("gamma length inconsistent with point count")
    dim = 3 * (n_points + 1)
    e1, e2 = _gamma_entry_indices(n_points)
    L = np.zeros(dim * dim)
    L[e1] = flat
    L[e2] = -flat
    L = L.reshape(dim, dim)
    return L + L.T


def Gamma_to_gamma(G, n_points: int) -> GammaMultipliers:
    """Extract stacked gamma vectors; rejects matrices off the structure.

    The inverse of :func:`gamma_to_Gamma`; raises when the input deviates
    from the cross-product block pattern by more than 1e-10 (relative).
    """
    G = np.asarray(G, dtype=np.float64)
    dim = 3 * (n_points + 1)
    if G.shape != (dim, dim):
        raise ValueError("dimension mismatch")
    e1, e2 = _gamma_entry_indices(n_points)
    flat = G.ravel()
    gamma = 0.5 * (flat[e1] - flat[e2])
    rebuilt = gamma_to_Gamma(gamma, n_points)
    scale = 1.0 + float(np.max(np.abs(G)))
    if float(np.max(np.abs(rebuilt - G))) > 1e-10 * scale:
        raise ValueError("invalid Gamma structure")
    return GammaMultipliers(gamma=gamma, n_points=n_points)


@dataclass(frozen=True, eq=False)
class CertificateProblem:
    """Fixed data of one certification: M, the candidate q, and R machinery."""

    M: np.ndarray
    lam: float
    q: LiftedVector
    R: np.ndarray
    RRt_pinv: np.ndarray
    n_points: int
    eps: float


@dataclass(frozen=True)
class DRConfig:
    beta: float = 1.0
    max_iters: int = 300
    # None -> scaled defaults 1e-5 * (1 + ||M||_F), resolved per problem
    cert_tol: float | None = None
    sub_tol: float | None = None

    def __post_init__(self):
        if not 0.0 < self.beta < 2.0:
            raise ValueError("beta must lie in (0, 2)")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass(eq=False)
class CertificateResult:
    certified: bool
    min_eig_K2: float
    iterations_used: int
    K_final: np.ndarray
    gamma_final: GammaMultipliers
    eig_trace: list = field(default_factory=list)
    subspace_residual: float = 0.0


def build_certificate_problem(
    d: Dataset, candidate: LineParams, eps: float = 1e-6
) -> CertificateProblem:
    """Assemble M, the lifted candidate, and the (pseudoinverted) R system.

    The candidate cost lam = q^T H q is held fixed as the multiplier of the
    unit-normal constraint.  R R^T is pseudoinverted once with a spectral
    cutoff; it is structurally rank-deficient because the redundant
    constraints make the multipliers non-unique.
    """
    candidate = canonicalize(candidate)
    e = residuals(candidate, d)
    alpha = alpha_from_residual(e)
    q = lift_solution(candidate, alpha)
    lp = build_lifted(d, eps)
    lam = lifted_cost(q, lp)
    M = lp.H.copy()
    M[0, 0] -= lam
    M[1, 1] -= lam

    pairs = pair_blocks(d.n)
    R = np.zeros((lp.dim, 3 * len(pairs)))
    for g, (n, m) in enumerate(pairs):
        R[3 * m : 3 * m + 3, 3 * g : 3 * g + 3] = cross_matrix(q.block(n))
        R[3 * n : 3 * n + 3, 3 * g : 3 * g + 3] = -cross_matrix(q.block(m))

    RRt = R @ R.T
    w, V = np.linalg.eigh(RRt)
    cutoff = 1e-10 * float(w[-1]) if w[-1] > 0.0 else np.inf
    inv_w = np.where(w > cutoff, 1.0 / np.where(w > cutoff, w, 1.0), 0.0)
    RRt_pinv = (V * inv_w) @ V.T

    return CertificateProblem(
        M=M, lam=lam, q=q, R=R, RRt_pinv=RRt_pinv, n_points=d.n, eps=float(eps)
    )


def _require_symmetric(K: np.ndarray):
    scale = max(1.0, float(np.max(np.abs(K))))
    if float(np.max(np.abs(K - K.T))) > 1e-10 * scale:
        raise ValueError("asymmetric input")


def proj_psd(K) -> np.ndarray:
    """Nearest PSD matrix in Frobenius norm (eigenvalue clamp)."""
    K = np.asarray(K, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError("dimension mismatch")
    _require_symmetric(K)
    return _clamp_psd(K)


def _clamp_psd(K: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(K)
    if w[0] >= 0.0:
        return K
    P = (V * np.maximum(w, 0.0)) @ V.T
    return 0.5 * (P + P.T)


def proj_sub(K, prob: CertificateProblem) -> np.ndarray:
    """Frobenius projection onto the structured stationarity subspace.

    Steps: Gamma = M - K; extract gamma (the skew content of the lower
    blocks -- everything else lies orthogonal to the subspace and drops
    out); correct gamma onto the solutions of R gamma = M q via the
    pseudoinverse; rebuild Gamma and return K' = M - Gamma'.
    """
    K = np.asarray(K, dtype=np.float64)
    if K.shape != prob.M.shape:
        raise ValueError("dimension mismatch")
    _require_symmetric(K)
    return _proj_sub_raw(K, prob)


def _proj_sub_raw(K: np.ndarray, prob: CertificateProblem) -> np.ndarray:
    e1, e2 = _gamma_entry_indices(prob.n_points)
    G = prob.M - K
    flat = G.ravel()
    gamma = 0.5 * (flat[e1] - flat[e2])
    resid = prob.R @ gamma - prob.M @ prob.q.q
    gamma -= prob.R.T @ (prob.RRt_pinv @ resid)
    dim = prob.M.shape[0]
    L = np.zeros(dim * dim)
    L[e1] = gamma
    L[e2] = -gamma
    L = L.reshape(dim, dim)
    return prob.M - (L + L.T)


def certify(
    d: Dataset,
    candidate: LineParams,
    eps: float = 1e-6,
    cfg: DRConfig | None = None,
) -> CertificateResult:
    """Run Douglas-Rachford between the PSD cone and the multiplier subspace.

    Starts from K = M (all multipliers zero).  After each sweep the minimum
    eigenvalue of the subspace-projected iterate K2 is recorded; the
    candidate is certified as soon as it clears -cert_tol (and the
    stationarity residual ||K2 q|| is within sub_tol).  Running out of
    iterations or diverging returns certified=False without raising.
    """
    cfg = cfg or DRConfig()
    prob = build_certificate_problem(d, candidate, eps)
    m_norm = float(np.linalg.norm(prob.M, "fro"))
    cert_tol = cfg.cert_tol if cfg.cert_tol is not None else 1e-5 * (1.0 + m_norm)
    sub_tol = cfg.sub_tol if cfg.sub_tol is not None else 1e-5 * (1.0 + m_norm)

    K = prob.M.copy()
    eig_trace: list = []
    K2 = K
    eig_ok = False
    iterations = 0
    for iterations in range(1, cfg.max_iters + 1):
        K1 = _clamp_psd(K)
        K2 = _proj_sub_raw(2.0 * K1 - K, prob)
        K = K + cfg.beta * (K2 - K1)
        min_eig = float(np.linalg.eigvalsh(K2)[0])
        eig_trace.append(min_eig)
        if min_eig >= -cert_tol:
            eig_ok = True
            break
        if float(np.linalg.norm(K, "fro")) > 1e6 * max(1.0, m_norm):
            break

    sub_res = float(np.linalg.norm(K2 @ prob.q.q))
    gamma_final = Gamma_to_gamma(prob.M - K2, prob.n_points)
    return CertificateResult(
        certified=eig_ok and sub_res <= sub_tol,
        min_eig_K2=eig_trace[-1],
        iterations_used=iterations,
        K_final=K2,
        gamma_final=gamma_final,
        eig_trace=eig_trace,
        subspace_residual=sub_res,
    )
