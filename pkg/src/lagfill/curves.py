"""Polyline curves and the exact action integral.

A curve is a polyline in R^4 with strictly increasing parameters in [0, 1].
Along a straight segment from ``a`` to ``b`` the Liouville form integrates
in closed form to ``1/2 omega(a, b)``, so :func:`action_integral` carries no
quadrature error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AlreadyClosed,
    EndpointMismatch,
    EndpointsNotOnGamma,
    NonTransversalPlanes,
    NotPlanar,
    WrongPlaneKind,
)
from .geometry import ANGLE_TOL, Boundary, LinearMap4, Plane, PlaneKind, as_vec4, symplectic_form

ENDPOINT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Curve:
    points: np.ndarray
    params: np.ndarray
    closed: bool = False

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        prm = np.array(self.params, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 4 or len(pts) < 2:
            raise ValueError(f"need at least two points of dimension 4, got {pts.shape}")
        if prm.shape != (len(pts),):
            raise ValueError("params must match points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("non-finite curve coordinates")
        if prm[0] != 0.0 or prm[-1] != 1.0 or np.any(np.diff(prm) <= 0):
            raise ValueError("params must increase strictly from 0 to 1")
        if self.closed and not np.array_equal(pts[0], pts[-1]):
            raise ValueError("closed curve must end where it starts")
        pts.setflags(write=False)
        prm.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "params", prm)
        object.__setattr__(self, "closed", bool(self.closed))

    @classmethod
    def from_points(cls, points, params=None, closed=None) -> "Curve":
        """Build a curve; params default to uniform, ``closed=None`` detects exact closure."""
        pts = np.asarray(points, dtype=float)
        if params is None:
            params = np.linspace(0.0, 1.0, len(pts))
        if closed is None:
            closed = len(pts) > 2 and np.array_equal(pts[0], pts[-1])
        return cls(pts, params, closed)

    def __len__(self):
        return len(self.points)

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    @property
    def n_segments(self) -> int:
        return len(self.points) - 1

    def __call__(self, s) -> np.ndarray:
        """Piecewise-linear evaluation at parameter values ``s``."""
        s = np.asarray(s, dtype=float)
        return np.stack([np.interp(s, self.params, self.points[:, k]) for k in range(4)], axis=-1)

    def with_params(self, params) -> "Curve":
        return Curve(self.points, params, self.closed)


@dataclass(frozen=True, eq=False)
class PlanarCurve(Curve):
    """Curve lying in the z1-plane (``line=1``) or the z2-plane (``line=2``)."""

    line: int = 1

    def __post_init__(self):
        super().__post_init__()
        if self.line not in (1, 2):
            raise ValueError("line must be 1 or 2")
        off = self.points[:, 2:] if self.line == 1 else self.points[:, :2]
        if np.any(off != 0.0):
            raise NotPlanar(f"curve leaves the z{self.line}-plane")


def as_planar(c: Curve, line: int | None = None) -> PlanarCurve:
    """View ``c`` as a planar curve; raises NotPlanar if off-line coordinates are nonzero."""
    if isinstance(c, PlanarCurve) and (line is None or c.line == line):
        return c
    if line is None:
        line = 1 if np.all(c.points[:, 2:] == 0.0) else 2
    return PlanarCurve(c.points, c.params, c.closed, line)


def segment(a, b) -> Curve:
    return Curve(np.array([as_vec4(a), as_vec4(b)]), [0.0, 1.0])


def length(c: Curve) -> float:
    return float(np.linalg.norm(np.diff(c.points, axis=0), axis=1).sum())


def segment_actions(c: Curve) -> np.ndarray:
    """Per-segment integrals of the Liouville form, 1/2 omega(p_i, p_{i+1})."""
    return 0.5 * symplectic_form(c.points[:-1], c.points[1:])


def action_integral(c: Curve) -> float:
    return float(segment_actions(c).sum())


def partial_area(w: Curve) -> np.ndarray:
    """Running action A(s_k) at every vertex of a planar curve.

    ``A[0] = 0`` and ``A[-1]`` equals :func:`action_integral`; for a closed
    loop A(s) is the signed area swept by the ray from the origin.
    """
    w = as_planar(w)
    seg = segment_actions(w)
    a = np.concatenate([[0.0], np.cumsum(seg)])
    # cumsum and pairwise sum round differently; pin the total
    a[-1] = seg.sum()
    return a


def _join_params(na: int, nb: int, pa, pb) -> np.ndarray:
    # weight each piece by its segment count
    split = na / (na + nb)
    return np.concatenate([pa * split, split + pb[1:] * (1 - split)])


def concat(a: Curve, b: Curve, closed: bool | None = None) -> Curve:
    if not np.array_equal(a.end, b.start):
        raise EndpointMismatch("concat needs a.end == b.start")
    pts = np.concatenate([a.points, b.points[1:]])
    prm = _join_params(a.n_segments, b.n_segments, a.params, b.params)
    prm[-1] = 1.0
    if closed is None:
        closed = np.array_equal(pts[0], pts[-1])
    return Curve(pts, prm, closed)


def reverse(c: Curve) -> Curve:
    return Curve(c.points[::-1], (1.0 - c.params)[::-1], c.closed)


def translate(c: Curve, v) -> Curve:
    return Curve(c.points + as_vec4(v), c.params, c.closed)


def transform(c: Curve, m: LinearMap4 | np.ndarray) -> Curve:
    mat = m.matrix if isinstance(m, LinearMap4) else np.asarray(m, dtype=float)
    pts = c.points @ mat.T
    if c.closed:
        pts[-1] = pts[0]
    return Curve(pts, c.params, c.closed)


def resample_with_index(c: Curve, n: int) -> tuple[Curve, np.ndarray]:
    """Arclength-proportional subdivision to ``max(n, c.n_segments)`` segments.

    Every original vertex is kept (their new indices are returned) and each
    segment is split into equal pieces; piece counts come from a
    largest-remainder allocation of ``n`` by segment length, at least one per
    segment.  Parameters are interpolated linearly inside each segment.
    """
    m = c.n_segments
    n = max(int(n), m)
    seg = np.linalg.norm(np.diff(c.points, axis=0), axis=1)
    counts = np.ones(m, dtype=int)
    extra = n - m
    total = seg.sum()
    if extra > 0:
        if total > 0:
            quota = extra * seg / total
        else:
            quota = np.full(m, extra / m)
        base = np.floor(quota).astype(int)
        counts += base
        left = extra - base.sum()
        order = np.argsort(-(quota - base), kind="stable")
        counts[order[:left]] += 1
    pts = [c.points[:1]]
    prm = [c.params[:1]]
    index = np.zeros(m + 1, dtype=int)
    for i in range(m):
        k = counts[i]
        f = np.arange(1, k + 1) / k
        seg_pts = c.points[i] + f[:, None] * (c.points[i + 1] - c.points[i])
        seg_pts[-1] = c.points[i + 1]
        seg_prm = c.params[i] + f * (c.params[i + 1] - c.params[i])
        seg_prm[-1] = c.params[i + 1]
        pts.append(seg_pts)
        prm.append(seg_prm)
        index[i + 1] = index[i] + k
    return Curve(np.concatenate(pts), np.concatenate(prm), c.closed), index


def resample(c: Curve, n: int) -> Curve:
    return resample_with_index(c, n)[0]


def refine_midpoints(c: Curve) -> Curve:
    """Insert the midpoint of every segment (exact for length and action up to rounding)."""
    mid = 0.5 * (c.points[:-1] + c.points[1:])
    pts = np.empty((2 * len(c) - 1, 4))
    pts[0::2] = c.points
    pts[1::2] = mid
    prm = np.empty(2 * len(c) - 1)
    prm[0::2] = c.params
    prm[1::2] = 0.5 * (c.params[:-1] + c.params[1:])
    return Curve(pts, prm, c.closed)


def close_with_chord(c: Curve) -> Curve:
    """Append the straight segment from the end of ``c`` back to its start."""
    if c.closed:
        raise AlreadyClosed("curve is already closed")
    return concat(c, segment(c.end, c.start), closed=True)


def on_plane(p, plane: Plane, tol: float = ENDPOINT_TOL) -> bool:
    p = as_vec4(p)
    return bool(plane.distance(p) <= tol * (1.0 + np.linalg.norm(p)))


def double_across_complex(c: Curve, plane: Plane) -> Curve:
    """Loop formed by ``c`` followed by its mirror image across ``plane``, reversed.

    The reflection preserves eta and reversal negates it, so the action of
    the result vanishes.  The mirror copy's endpoints are snapped to the
    original ones (they agree up to the endpoint tolerance).
    """
    if plane.kind is not PlaneKind.COMPLEX:
        raise WrongPlaneKind("doubling needs a complex plane")
    if not (on_plane(c.start, plane) and on_plane(c.end, plane)):
        raise EndpointsNotOnGamma("curve endpoints are not on the plane")
    mirror = 2.0 * plane.project(c.points) - c.points
    back = mirror[::-1].copy()
    back[0] = c.end
    back[-1] = c.start
    mirror_curve = Curve(back, (1.0 - c.params)[::-1])
    return concat(c, mirror_curve, closed=True)


def component_split(c: Curve) -> tuple[PlanarCurve, PlanarCurve]:
    """Coordinate projections onto the z1- and z2-planes (they sum back to ``c``)."""
    p1 = c.points.copy()
    p1[:, 2:] = 0.0
    p2 = c.points.copy()
    p2[:, :2] = 0.0
    a1 = PlanarCurve(p1, c.params, len(c) > 2 and np.array_equal(p1[0], p1[-1]), 1)
    a2 = PlanarCurve(p2, c.params, len(c) > 2 and np.array_equal(p2[0], p2[-1]), 2)
    return a1, a2


@dataclass(frozen=True)
class WedgeReport:
    endpoint_norms: tuple[float, float]
    curve_length: float
    theta_min: float
    csc_bound: float
    bound_ok: bool


def augment_with_origin_segments(c: Curve, gamma: Boundary) -> tuple[Curve, WedgeReport]:
    """Close ``c`` through the origin: 0 -> c.start -> ... -> c.end -> 0.

    ``c.start`` must lie on the first plane of the pair and ``c.end`` on
    the second.  Also checks |p_i| <= length(c) / sin(theta_min).
    """
    if not gamma.is_pair:
        raise ValueError("augment_with_origin_segments needs a pair of planes")
    if gamma.theta_min <= ANGLE_TOL:
        raise NonTransversalPlanes("planes are not transversal", theta_min=gamma.theta_min)
    p1, p2 = gamma.planes
    if not (on_plane(c.start, p1) and on_plane(c.end, p2)):
        raise EndpointsNotOnGamma("endpoint i must lie on plane i")
    zero = np.zeros(4)
    loop = concat(concat(segment(zero, c.start), c), segment(c.end, zero), closed=True)
    lc = length(c)
    norms = (float(np.linalg.norm(c.start)), float(np.linalg.norm(c.end)))
    bound = lc / np.sin(gamma.theta_min)
    report = WedgeReport(norms, lc, float(gamma.theta_min), float(bound), bool(max(norms) <= bound))
    return loop, report
