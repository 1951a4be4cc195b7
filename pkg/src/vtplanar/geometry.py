"""Angle equation, geometry classification and polygon placement.

Frames are 3x3 matrices acting on homogeneous coordinates:

* Euclidean: points ``(x, y, 1)``, affine matrices.
* Spherical: unit vectors, rotations.
* Hyperbolic: hyperboloid points ``(x, y, t)`` with ``t^2 - x^2 - y^2 = 1``,
  Lorentz boosts.

In all three the origin is ``(0, 0, 1)`` and a frame maps the origin to a
point and the x-axis to a direction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import bisect

from .scheme_core import SchemeError


class GeometryError(SchemeError):
    """Raised for type vectors with no regular realization."""


class Geometry(enum.Enum):
    SPHERICAL = "spherical"
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"


INFINITY = math.inf


@dataclass(frozen=True)
class EdgeLengthSolution:
    geometry: Geometry
    length: float
    angles: tuple[float, ...]

    @property
    def residual(self) -> float:
        return abs(math.fsum(self.angles) - 2 * math.pi)


def angle_sum(tv: Sequence[float]) -> Fraction:
    """Sum of the Euclidean interior angles divided by pi."""
    total = Fraction(0)
    for k in tv:
        total += 1 if k == INFINITY else Fraction(int(k) - 2, int(k))
    return total


def _check_tv(tv: Sequence[float]) -> tuple[float, ...]:
    tv = tuple(tv)
    if len(tv) < 3:
        raise GeometryError("type vectors need at least three faces")
    for k in tv:
        if k != INFINITY and (int(k) != k or k < 3):
            raise GeometryError(f"face size {k} is not allowed (need an integer >= 3 or inf)")
    return tv


def classify_geometry(tv: Sequence[float]) -> Geometry:
    """Geometry whose regular polygons fit around a vertex of type ``tv``.

    Raises:
        GeometryError: if an infinite face would have to live on the sphere.
    """
    tv = _check_tv(tv)
    s = angle_sum(tv)
    if s == 2:
        return Geometry.EUCLIDEAN
    if s > 2:
        return Geometry.HYPERBOLIC
    if INFINITY in tv:
        raise GeometryError("an infinite face cannot close up on the sphere")
    return Geometry.SPHERICAL


def interior_angle(k: float, length: float, g: Geometry) -> float:
    """Interior angle of the regular ``k``-gon with side ``length``."""
    if g is Geometry.EUCLIDEAN:
        return math.pi if k == INFINITY else (k - 2) * math.pi / k
    if length <= 0:
        raise GeometryError("edge length must be positive")
    c = 1.0 if k == INFINITY else math.cos(math.pi / k)
    if g is Geometry.HYPERBOLIC:
        return 2 * math.asin(c / math.cosh(length / 2))
    if k == INFINITY:
        raise GeometryError("no infinite faces on the sphere")
    x = c / math.cos(length / 2)
    if x > 1 or length >= math.pi:
        raise GeometryError(f"no spherical {k}-gon with side {length}")
    return 2 * math.asin(x)


def is_degree3_exception(tv: Sequence[float]) -> bool:
    """Degree-3 type vectors that solve the angle equation but admit no scheme."""
    if len(tv) != 3 or INFINITY in tv:
        return False
    a, b, c = sorted(int(k) for k in tv)
    return a == 3 and ((b == 3 and c >= 5) or (b == 4 and c >= 6) or (b == 5 and c >= 9))


def solve_edge_length(tv: Sequence[float]) -> EdgeLengthSolution:
    """Edge length making the interior angles around a vertex sum to 2 pi.

    Euclidean type vectors get length 1 by convention.

    Raises:
        GeometryError: excluded degree-3 type vectors or unrealizable type vectors.
    """
    tv = _check_tv(tv)
    if is_degree3_exception(tv):
        raise GeometryError("no labeling scheme validates this type vector")
    g = classify_geometry(tv)
    if g is Geometry.EUCLIDEAN:
        return EdgeLengthSolution(g, 1.0, tuple(interior_angle(k, 1.0, g) for k in tv))

    def f(l):
        return math.fsum(interior_angle(k, l, g) for k in tv) - 2 * math.pi

    lo = 1e-300
    if g is Geometry.HYPERBOLIC:
        # angles decrease from their Euclidean values towards 0
        hi = 64.0
    else:
        # a regular k-gon needs cos(pi/k) <= cos(l/2), so the largest face
        # bounds the side from above
        hi = min(2 * math.pi / k for k in tv)
        # at hi the largest face is a hemisphere (angle pi); a root there is
        # degenerate, e.g. [3,3,4]
        if abs(f(hi)) < 1e-9:
            raise GeometryError(f"only a degenerate solution exists for {list(tv)}")
    try:
        l = bisect(f, lo, hi, xtol=1e-300, rtol=8.9e-16, maxiter=200, disp=False)
    except ValueError as exc:
        raise GeometryError(f"angle equation has no root for {list(tv)}") from exc
    # polish at the last few ulps so the residual is as small as doubles allow
    best = l
    for cand in np.nextafter(l, [0, hi]).tolist() + [l]:
        if abs(f(cand)) < abs(f(best)):
            best = cand
    return EdgeLengthSolution(g, best, tuple(interior_angle(k, best, g) for k in tv))


# ---------------------------------------------------------------------------
# Frames
# ---------------------------------------------------------------------------

ORIGIN = np.array([0.0, 0.0, 1.0])


def rotation(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def translation(length: float, g: Geometry) -> np.ndarray:
    """Move the origin a distance ``length`` along the x-axis."""
    if g is Geometry.EUCLIDEAN:
        return np.array([[1.0, 0.0, length], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    if g is Geometry.SPHERICAL:
        c, s = math.cos(length), math.sin(length)
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    c, s = math.cosh(length), math.sinh(length)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def reflection() -> np.ndarray:
    """Mirror in the x-axis."""
    return np.diag([1.0, -1.0, 1.0])


def point(frame: np.ndarray) -> np.ndarray:
    return frame @ ORIGIN


def distance(p: np.ndarray, q: np.ndarray, g: Geometry) -> float:
    if g is Geometry.EUCLIDEAN:
        return float(math.hypot(p[0] / p[2] - q[0] / q[2], p[1] / p[2] - q[1] / q[2]))
    if g is Geometry.SPHERICAL:
        return float(math.atan2(np.linalg.norm(np.cross(p, q)), float(p @ q)))
    b = p[2] * q[2] - p[0] * q[0] - p[1] * q[1]
    return float(math.acosh(max(1.0, b)))


def to_plane(p: np.ndarray, g: Geometry) -> tuple[float, float]:
    """2D drawing coordinates: Poincare disk, stereographic, or Cartesian."""
    if g is Geometry.EUCLIDEAN:
        return float(p[0] / p[2]), float(p[1] / p[2])
    if g is Geometry.HYPERBOLIC:
        return float(p[0] / (1 + p[2])), float(p[1] / (1 + p[2]))
    # stereographic from the pole opposite the root
    return float(p[0] / (1 + p[2])), float(p[1] / (1 + p[2]))


def place_polygon(frame: np.ndarray, k: int, length: float, g: Geometry, angle: float | None = None):
    """Vertices of the regular ``k``-gon with one vertex at the frame origin.

    The first side runs along the frame's x-axis and the polygon lies on the
    frame's left (counter-clockwise interior).

    Returns:
        list of 3-vectors, starting with the frame origin.
    """
    if angle is None:
        angle = interior_angle(k, length, g)
    pts = []
    m = frame
    for _ in range(k):
        pts.append(point(m))
        m = m @ translation(length, g) @ rotation(math.pi - angle)
    return pts


def geodesic_arc(p: tuple[float, float], q: tuple[float, float]):
    """Circle through two Poincare-disk points orthogonal to the unit circle.

    Returns:
        ``None`` for a diameter (straight segment), else ``(cx, cy, r)``.
    """
    x1, y1 = p
    x2, y2 = q
    det = x1 * y2 - x2 * y1
    if abs(det) < 1e-12:
        return None
    a1 = (x1 * x1 + y1 * y1 + 1) / 2
    a2 = (x2 * x2 + y2 * y2 + 1) / 2
    cx = (a1 * y2 - a2 * y1) / det
    cy = (x1 * a2 - x2 * a1) / det
    r = math.sqrt(max(cx * cx + cy * cy - 1, 0.0))
    return cx, cy, r
