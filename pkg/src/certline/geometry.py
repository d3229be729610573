"""Core line/dataset types, residuals, and the quadratic and robust costs.

Lines are stored as (a, b, c) with the convention a*x + b*y - c = 0: the
pair (a, b) is the line normal and c the offset from the origin.  Scaling
(a, b, c) by any nonzero factor leaves the point set unchanged, so fitted
lines are reported in a canonical form: unit normal with b > 0, or a > 0
when b = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import kernels


class DataPoint(NamedTuple):
    """A single 2-D measurement."""

    x: float
    y: float


@dataclass(frozen=True, eq=False)
class Dataset:
    """Ordered collection of 2-D points stored as parallel float64 arrays.

    The point order is stable and defines the index n used everywhere else.
    Construction rejects non-finite coordinates; fitting operations require
    at least two points but the container itself may hold fewer.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.float64)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("x and y must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("non-finite coordinate")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_points(cls, points: Iterable) -> "Dataset":
        pts = [(float(p[0]), float(p[1])) for p in points]
        xs = np.array([p[0] for p in pts], dtype=np.float64)
        ys = np.array([p[1] for p in pts], dtype=np.float64)
        return cls(xs, ys)

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    def __len__(self) -> int:
        return self.n

    @property
    def points(self) -> list[DataPoint]:
        return [DataPoint(float(a), float(b)) for a, b in zip(self.x, self.y)]


@dataclass(frozen=True)
class LineParams:
    """Line a*x + b*y - c = 0; (a, b) is the normal, c the offset."""

    a: float
    b: float
    c: float

    def normal(self) -> np.ndarray:
        return np.array([self.a, self.b])

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c])

    def is_canonical(self, tol: float = 1e-12) -> bool:
        unit = abs(self.a * self.a + self.b * self.b - 1.0) <= tol
        sign = self.b > 0.0 or (self.b == 0.0 and self.a > 0.0)
        return unit and sign


def canonicalize(line: LineParams) -> LineParams:
    """Rescale to a unit normal and fix the sign (b > 0, tie-break a > 0).

    The represented point set is unchanged.  Raises ValueError on a zero
    normal.
    """
    norm = math.hypot(line.a, line.b)
    if norm == 0.0:
        raise ValueError("degenerate normal")
    a, b, c = line.a / norm, line.b / norm, line.c / norm
    if b < 0.0 or (b == 0.0 and a < 0.0):
        a, b, c = -a, -b, -c
    # + 0.0 turns any -0.0 into 0.0 so the sign convention is unambiguous
    return LineParams(a + 0.0, b + 0.0, c + 0.0)


def residual(line: LineParams, point) -> float:
    """Signed offset a*x + b*y - c of a single point."""
    px, py = point
    return line.a * float(px) + line.b * float(py) - line.c


def residuals(line: LineParams, d: Dataset) -> np.ndarray:
    """Signed offsets of every point, in dataset order."""
    return line.a * d.x + line.b * d.y - line.c


def tls_cost(line: LineParams, d: Dataset) -> float:
    """Mean squared residual (1/N) * sum(e^2)."""
    if d.n == 0:
        raise ValueError("empty dataset")
    e = residuals(line, d)
    return float(e @ e) / d.n


def gm_cost(line: LineParams, d: Dataset) -> float:
    """Geman-McClure cost sum(e^2 / (1 + e^2)); each term lies in [0, 1)."""
    return float(
        kernels.gm_cost_points(d.x, d.y, float(line.a), float(line.b), float(line.c))
    )


def line_angle(line: LineParams) -> float:
    """Angle of the normal; lies in [0, pi) for a canonical line."""
    return math.atan2(line.b, line.a)


def lines_equal(l1: LineParams, l2: LineParams, tol: float = 1e-9) -> bool:
    """Geometric equality after canonicalization.

    True when the angular distance between the normals (mod pi) and the
    matching offset difference are both within tol.
    """
    l1 = canonicalize(l1)
    l2 = canonicalize(l2)
    dtheta = line_angle(l1) - line_angle(l2)
    c2 = l2.c
    if dtheta > math.pi / 2:
        dtheta -= math.pi
        c2 = -c2
    elif dtheta < -math.pi / 2:
        dtheta += math.pi
        c2 = -c2
    return abs(dtheta) <= tol and abs(l1.c - c2) <= tol
