"""Sparse SDPA (.dat-s) export of the relaxation, plus a reader for round-trips.

The file uses the standard dual-form convention: the stored objective
matrix is F0 = -H, so an external solver maximizing tr(F0 Y) subject to
tr(Fk Y) = b_k, Y >= 0 reports the negated value of our minimization.
Values are written with shortest round-trip precision, so re-importing
reproduces every matrix bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sdp import _SKEW_IJ, SdpProblem


@dataclass(frozen=True, eq=False)
class SdpaData:
    """Parsed sparse-SDPA problem (single block)."""

    n_constraints: int
    block_dims: list
    rhs: np.ndarray
    matrices: list  # index 0 is the objective F0, then F1..Fm


def _fmt(v: float) -> str:
    return repr(float(v))


def export_sdpa(problem: SdpProblem, path) -> None:
    """Write the problem in sparse SDPA format (one block, upper triangle)."""
    dim = problem.dim
    m = problem.n_constraints
    lines = [str(m), "1", str(dim)]
    rhs = ["1.0"] + ["0.0"] * (m - 1)
    lines.append(" ".join(rhs))

    # objective F0 = -H
    H = problem.H
    for i in range(dim):
        for j in range(i, dim):
            if H[i, j] != 0.0:
                lines.append(f"0 1 {i + 1} {j + 1} {_fmt(-H[i, j])}")

    # constraint 1: tr(Q_00 J) = 1
    lines.append("1 1 1 1 1.0")
    lines.append("1 1 2 2 1.0")

    # symmetry constraints, three per block pair; cm + j < rn + i for m < n,
    # so the written entry is always in the upper triangle
    k = 1
    for (n, mm) in problem.pairs:
        rn, cm = 3 * n, 3 * mm
        for (i, j) in _SKEW_IJ:
            k += 1
            lines.append(f"{k} 1 {cm + j + 1} {rn + i + 1} 0.5")
            lines.append(f"{k} 1 {cm + i + 1} {rn + j + 1} -0.5")

    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_sdpa(path) -> SdpaData:
    """Parse a single-block sparse SDPA file into dense matrices."""
    with open(path) as fh:
        raw = [ln.strip() for ln in fh]
    rows = [ln for ln in raw if ln and not ln.startswith(("*", '"'))]
    m = int(rows[0])
    nblocks = int(rows[1])
    if nblocks != 1:
        raise ValueError("only single-block SDPA files are supported")
    dims_txt = rows[2].replace("{", " ").replace("}", " ").replace(",", " ")
    block_dims = [abs(int(t)) for t in dims_txt.split()]
    dim = block_dims[0]
    rhs = np.array([float(t) for t in rows[3].split()])
    if rhs.shape[0] != m:
        raise ValueError("constraint vector length mismatch")
    mats = [np.zeros((dim, dim)) for _ in range(m + 1)]
    for ln in rows[4:]:
        t = ln.split()
        matno, _blk, i, j = int(t[0]), int(t[1]), int(t[2]), int(t[3])
        val = float(t[4])
        mats[matno][i - 1, j - 1] = val
        mats[matno][j - 1, i - 1] = val
    return SdpaData(n_constraints=m, block_dims=block_dims, rhs=rhs, matrices=mats)
