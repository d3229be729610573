"""Certifiably robust 2-D line fitting.

Closed-form total least squares, Geman-McClure IRLS, a lifted SDP
relaxation with redundant constraints, and a Douglas-Rachford optimality
certificate, with synthetic scenario generation and a CLI on top.
"""

from .certificate import (
    CertificateProblem,
    CertificateResult,
    DRConfig,
    GammaMultipliers,
    Gamma_to_gamma,
    build_certificate_problem,
    certify,
    cross_matrix,
    gamma_to_Gamma,
    proj_psd,
    proj_sub,
)
from .geometry import (
    DataPoint,
    Dataset,
    LineParams,
    canonicalize,
    gm_cost,
    line_angle,
    lines_equal,
    residual,
    residuals,
    tls_cost,
)
from .irls import IrlsConfig, IrlsResult, gm_weight, irls_step, run_irls
from .kernels import BACKEND
from .lifting import (
    J,
    LiftedProblem,
    LiftedVector,
    alpha_from_residual,
    build_lifted,
    lift_solution,
    lifted_cost,
    pair_blocks,
)
from .oracle import OracleConfig, grid_search
from .sdp import (
    SdpProblem,
    SdpSolution,
    build_sdp,
    constraint_violations,
    extract_rank1,
    solve_sdp,
)
from .sdpa import SdpaData, export_sdpa, read_sdpa
from .synth import SyntheticSpec, generate
from .tls import (
    Eig2,
    MomentSummary,
    TlsSdpSolution,
    TlsSolution,
    duality_gap,
    eig2_sym,
    moments,
    solve_tls,
    solve_tls_sdp,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CertificateProblem",
    "CertificateResult",
    "DRConfig",
    "DataPoint",
    "Dataset",
    "Eig2",
    "GammaMultipliers",
    "Gamma_to_gamma",
    "IrlsConfig",
    "IrlsResult",
    "J",
    "LiftedProblem",
    "LiftedVector",
    "LineParams",
    "MomentSummary",
    "OracleConfig",
    "SdpProblem",
    "SdpSolution",
    "SdpaData",
    "SyntheticSpec",
    "TlsSdpSolution",
    "TlsSolution",
    "alpha_from_residual",
    "build_certificate_problem",
    "build_lifted",
    "build_sdp",
    "canonicalize",
    "certify",
    "constraint_violations",
    "cross_matrix",
    "duality_gap",
    "eig2_sym",
    "export_sdpa",
    "extract_rank1",
    "gamma_to_Gamma",
    "generate",
    "gm_cost",
    "gm_weight",
    "grid_search",
    "irls_step",
    "lift_solution",
    "lifted_cost",
    "line_angle",
    "lines_equal",
    "moments",
    "pair_blocks",
    "proj_psd",
    "proj_sub",
    "read_sdpa",
    "residual",
    "residuals",
    "run_irls",
    "solve_sdp",
    "solve_tls",
    "solve_tls_sdp",
    "tls_cost",
]
