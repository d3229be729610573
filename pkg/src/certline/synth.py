"""Synthetic scenario generation: inliers along a line plus box outliers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Dataset, LineParams, canonicalize


@dataclass(frozen=True)
class SyntheticSpec:
    n_total: int
    n_outliers: int
    true_line: LineParams
    inlier_noise_sigma: float
    outlier_box: float
    seed: int

    def __post_init__(self):
        if self.n_total < 0 or not 0 <= self.n_outliers <= self.n_total:
            raise ValueError("need 0 <= n_outliers <= n_total")
        if self.inlier_noise_sigma < 0.0:
            raise ValueError("noise sigma must be nonnegative")
        if self.outlier_box <= 0.0:
            raise ValueError("outlier box half-width must be positive")


def generate(spec: SyntheticSpec) -> tuple[Dataset, np.ndarray]:
    """Sample a dataset; returns (dataset, outlier mask).

    Inliers are placed uniformly along the true line (within the box span)
    with Gaussian perpendicular noise; outliers are uniform in the box.
    Inliers come first in the point order.  Fully deterministic in the seed.
    """
    line = canonicalize(spec.true_line)
    rng = np.random.default_rng(spec.seed)
    n_in = spec.n_total - spec.n_outliers
    normal = np.array([line.a, line.b])
    tangent = np.array([-line.b, line.a])
    anchor = line.c * normal

    t = rng.uniform(-spec.outlier_box, spec.outlier_box, n_in)
    noise = rng.normal(0.0, spec.inlier_noise_sigma, n_in)
    inliers = anchor + t[:, None] * tangent + noise[:, None] * normal
    outliers = rng.uniform(
        -spec.outlier_box, spec.outlier_box, size=(spec.n_outliers, 2)
    )

    pts = np.vstack([inliers.reshape(n_in, 2), outliers])
    mask = np.zeros(spec.n_total, dtype=bool)
    mask[n_in:] = True
    return Dataset(pts[:, 0], pts[:, 1]), mask
