"""Explicit isotropic homotopies and their meshes.

Each constructor returns a :class:`Homotopy` whose mesh rows ``H[:, j]`` are
the intermediate curves.  Why each family is isotropic (the pullback of
omega vanishes identically) is worked out next to its constructor.  The
decoupling and rotation meshes are isotropic up to rounding; the cone
contraction carries a discretization error that shrinks under refinement.
:func:`lagfill.surfaces.isotropy_residual` measures both.

Curves fed to :func:`decouple` are read in the vertex-index
parametrization (vertex ``k`` of an ``N``-segment curve sits at ``k/N``);
callers resample to arclength first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import Curve, action_integral, length, partial_area
from .errors import (
    CurveMismatch,
    NonZeroSymplecticArea,
    NotBasedAtOrigin,
    NotClosed,
    PreconditionViolated,
    WrongPlane,
)
from .surfaces import SurfaceMesh, cell_areas

ENDPOINT_TOL = 1e-9
ACTION_TOL = 1e-9


@dataclass(frozen=True)
class Stage:
    name: str
    row_start: int
    row_stop: int
    area: float


@dataclass(frozen=True, eq=False)
class Homotopy:
    mesh: SurfaceMesh
    stages: tuple

    @property
    def start_curve(self) -> Curve:
        return Curve.from_points(self.mesh.vertices[:, 0], self.mesh.s_params)

    @property
    def end_curve(self) -> Curve:
        return Curve.from_points(self.mesh.vertices[:, -1], self.mesh.s_params)

    @property
    def swept_area(self) -> float:
        return float(sum(s.area for s in self.stages))

    @property
    def n_rows(self) -> int:
        return self.mesh.dims[1]

    def stage_areas(self) -> dict:
        return {s.name: s.area for s in self.stages}


def _from_vertices(vertices: np.ndarray, name: str, s_params=None) -> Homotopy:
    mesh = SurfaceMesh(vertices, s_params=s_params)
    area = float(cell_areas(mesh).sum())
    return Homotopy(mesh, (Stage(name, 0, mesh.dims[1] - 1, area),))


def _unit_angles(nt: int) -> tuple[np.ndarray, np.ndarray]:
    """sin/cos on a uniform grid of [0, pi/2] with exact values at both ends."""
    theta = 0.5 * np.pi * np.arange(nt + 1) / nt
    s, c = np.sin(theta), np.cos(theta)
    s[0], c[0], s[-1], c[-1] = 0.0, 1.0, 1.0, 0.0
    return s, c


def _interp_index(points: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Evaluate a polyline at fractional vertex indices ``x`` (any shape)."""
    n = len(points) - 1
    j = np.clip(np.floor(x).astype(int), 0, max(n - 1, 0))
    lam = (x - j)[..., None]
    if n == 0:
        return np.broadcast_to(points[0], x.shape + points.shape[1:]).copy()
    return (1.0 - lam) * points[j] + lam * points[j + 1]


def _scale(c: Curve) -> float:
    return max(1.0, float(np.abs(c.points).max()))


def decouple(alpha: Curve, nt: int) -> Homotopy:
    """Deform ``alpha`` into the curve that runs its z1-part first, then its z2-part.

    With alpha = alpha1 + alpha2 (coordinate projections) the homotopy is

        H(s, t) = alpha1(f_t(s)) + alpha2(g_t(s)),
        f_t(s) = (1-t) s + t min(2s, 1),   g_t(s) = (1-t) s + t max(2s-1, 0).

    Isotropy: H_s ^ H_t = (a ^ b)(f_s g_t - f_t g_s) with a = alpha1'(f) in
    the z1-line and b = alpha2'(g) in the z2-line, and omega(a, b) = 0
    because omega pairs coordinates only within each complex line.  The
    (f, g) image of the square is the triangle g <= f, so the swept area is
    at most L1 L2 <= L^2 / 2.

    Discretization.  H depends on (s, t) only through (f, g), and the
    surface is the image of the triangle {0 <= g <= f <= 1}.  In vertex-index
    units (x = N f, y = N g) both components are affine on every unit square
    [i, i+1] x [j, j+1], so H maps each such square onto a flat piece of an
    isotropic plane.  Sampling the schedule above on a tensor grid would cut
    across these squares (and corners of the curve) and leave an O(1/N)
    isotropy defect; instead the mesh sweeps the same triangle with rows
    that are lattice paths:

    * row 0: the diagonal x = y = k/2 (``alpha`` with midpoints inserted);
    * row ``1 + d`` (d = 0..N): d steps along x, then alternating x and y
      steps, then d steps along y; row ``N + 1`` is the final curve.

    Consecutive rows bound half-squares of the lattice, so every mesh
    triangle lies in one square and the mesh is isotropic up to rounding,
    and a planar ``alpha`` sweeps zero area.  The ``N + 1`` steps are
    subdivided linearly to reach ``nt`` rows when ``nt > N + 1``.

    An ``N``-segment curve gives ``2N + 1`` columns at s = k/(2N); the last
    row visits every vertex of alpha1 and then every vertex of alpha2, so
    its action equals that of ``alpha`` exactly (up to rounding).  Both
    endpoint trajectories are constant.
    """
    p = alpha.points
    scale = _scale(alpha)
    on_z1 = np.linalg.norm(p[0, 2:]) <= ENDPOINT_TOL * scale and np.linalg.norm(p[-1, 2:]) <= ENDPOINT_TOL * scale
    at_origin = alpha.closed and not np.any(p[0])
    if not (on_z1 or at_origin):
        raise PreconditionViolated("decouple needs z2-components zero at both ends or a loop at the origin")
    n = alpha.n_segments
    xf, xg = _lattice_rows(n)
    xf, xg = _subdivide_rows(xf, nt), _subdivide_rows(xg, nt)
    h = np.empty(xf.shape + (4,))
    h[..., :2] = _interp_index(p[:, :2], xf)
    h[..., 2:] = _interp_index(p[:, 2:], xg)
    return _from_vertices(h, "decouple")


def _lattice_rows(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vertex-index coordinates (x, y) of the decoupling rows, shape (2n+1, n+2)."""
    k = np.arange(2 * n + 1)
    xf = np.empty((2 * n + 1, n + 2))
    xg = np.empty_like(xf)
    xf[:, 0] = xg[:, 0] = k / 2.0
    for d in range(n + 1):
        m = np.clip(k - d, 0, 2 * (n - d))
        xf[:, d + 1] = np.minimum(k, d) + (m + 1) // 2
        xg[:, d + 1] = m // 2 + np.maximum(k - (2 * n - d), 0)
    return xf, xg


def _subdivide_rows(x: np.ndarray, nt: int) -> np.ndarray:
    """Insert rows by linear interpolation so that there are at least ``nt`` steps."""
    steps = x.shape[1] - 1
    if nt <= steps:
        return x
    per = np.full(steps, nt // steps)
    per[: nt % steps] += 1
    rows = [x[:, :1]]
    for j in range(steps):
        lam = np.arange(1, per[j] + 1) / per[j]
        rows.append(x[:, j : j + 1] * (1.0 - lam) + x[:, j + 1 : j + 2] * lam)
    return np.concatenate(rows, axis=1)


def _rotate_columns(points: np.ndarray, start: int, nt: int) -> np.ndarray:
    """Rows of the rotation homotopy applied to columns ``start:`` (which lie in the z2-line)."""
    sin, cos = _unit_angles(nt)
    h = np.repeat(points[:, None, :], nt + 1, axis=1)
    w = points[start:, 2:]
    h[start:, :, 0:2] = w[:, None, :] * sin[None, :, None]
    h[start:, :, 2:4] = w[:, None, :] * cos[None, :, None]
    return h


def rotate_loop_to_z1(w: Curve, nt: int) -> Homotopy:
    """Carry a loop in the z2-line through the origin into the z1-line.

        H(s, theta) = (w(s) sin(theta), w(s) cos(theta)),  theta in [0, pi/2].

    For each theta the map w -> (w sin, w cos) is complex linear and
    multiplies omega by sin^2 + cos^2 = 1 between equal angles, while
    omega(H_s, H_theta) = sin cos omega(w', w) - cos sin omega(w', w) = 0.
    The mesh inherits this exactly: every cell has zero symplectic area up
    to rounding.  H_s and H_theta are orthogonal with lengths |w'| and |w|,
    so the swept area is (pi/2) * integral |w| |w'| ds <= (pi/4) L^2.
    """
    p = w.points
    if np.any(p[:, :2]):
        raise WrongPlane("rotate_loop_to_z1 needs a curve in the z2-line")
    if not w.closed:
        raise NotClosed("rotate_loop_to_z1 needs a closed loop")
    if np.any(p[0]):
        raise NotBasedAtOrigin("loop must start at the origin")
    return _from_vertices(_rotate_columns(p, 0, nt), "rotate", w.params)


def rotate_tail(beta: Curve, start: int, nt: int) -> Homotopy:
    """Rotation applied to the z2 loop occupying columns ``start:`` of ``beta``.

    Columns before ``start`` (a z1 path ending at the origin) stay fixed; this
    is the second stage of the complex half-disk construction.
    """
    p = beta.points
    if np.any(p[start:, :2]) or np.any(p[start]) or np.any(p[-1]):
        raise WrongPlane("tail must be a z2 loop based at the origin")
    return _from_vertices(_rotate_columns(p, start, nt), "rotate", beta.params)


def contract_planar_zero_area_loop(w: Curve, nt: int, tol: float = ACTION_TOL) -> Homotopy:
    """Contract a zero-action loop in the z1-line through isotropic surfaces.

    Phase A (compensated cone), with R = max |w|, A the running action of w
    and phi = 2 A / R^2:

        H(s, psi) = (cos(psi) w(s), R sin(psi) e^{i phi(s)}),  psi in [0, pi/2].

    This is the cone (1-t) w paired with the circle of radius
    r = R sqrt(2t - t^2) under 1 - t = cos(psi).  The z1 part contributes
    d(cos^2)/dpsi * (-A') and the z2 part R^2 d(sin^2)/dpsi * phi'/2, which
    cancel.  On the mesh the cancellation is exact in psi and leaves only the
    per-segment defect A'_k - (R^2/2) sin(2 A'_k / R^2), of order
    (segment area)^3 / R^4.

    Phase B (unwind): H(s, u) = (0, R e^{i (1-u) phi(s)}) stays on a circle
    and ends at the point (0, R).

    phi vanishes at both ends because A(1) = 0; a tolerated defect A(1) is
    spread linearly over the loop so that the side edges stay glued exactly.
    """
    p = w.points
    if np.any(p[:, 2:]):
        raise WrongPlane("contraction needs a loop in the z1-line")
    if not w.closed:
        raise NotClosed("contraction needs a closed loop")
    if np.any(p[0]):
        raise NotBasedAtOrigin("loop must start at the origin")
    total = action_integral(w)
    lw = length(w)
    if abs(total) > tol * lw**2:
        raise NonZeroSymplecticArea(
            f"loop has symplectic area {total:.6g}", action=total, length=lw
        )
    n = len(p)
    radius = float(np.linalg.norm(p[:, :2], axis=1).max())
    if radius == 0.0:
        h = np.zeros((n, nt + 1, 4))
        mesh = SurfaceMesh(h, s_params=w.params)
        return Homotopy(mesh, (Stage("contract_cone", 0, nt, 0.0),))
    a = partial_area(w)
    frac = np.arange(n) / (n - 1)
    phi = 2.0 * (a - frac * a[-1]) / radius**2
    phi[0] = phi[-1] = 0.0
    sin, cos = _unit_angles(nt)
    cone = np.empty((n, nt + 1, 4))
    cone[..., :2] = p[:, None, :2] * cos[None, :, None]
    cone[..., 2] = radius * sin[None, :] * np.cos(phi)[:, None]
    cone[..., 3] = radius * sin[None, :] * np.sin(phi)[:, None]
    cone[:, -1, :2] = 0.0
    u = np.arange(nt + 1) / nt
    ang = phi[:, None] * (1.0 - u)[None, :]
    unwind = np.zeros((n, nt + 1, 4))
    unwind[..., 2] = radius * np.cos(ang)
    unwind[..., 3] = radius * np.sin(ang)
    unwind[:, 0] = cone[:, -1]
    h1 = _from_vertices(cone, "contract_cone", w.params)
    h2 = _from_vertices(unwind, "contract_unwind", w.params)
    return concat_homotopies(h1, h2)


def constant_homotopy(c: Curve, nt: int = 1, name: str = "constant") -> Homotopy:
    h = np.repeat(c.points[:, None, :], nt + 1, axis=1)
    return _from_vertices(h, name, c.params)


def concat_homotopies(h1: Homotopy, h2: Homotopy, tol: float = 1e-9) -> Homotopy:
    """Stack ``h2`` after ``h1`` in t; the shared seam row appears once.

    The combined t-parameter is proportional to row index, so each stage gets
    a share of [0, 1] proportional to its row count.
    """
    v1, v2 = h1.mesh.vertices, h2.mesh.vertices
    if v1.shape[0] != v2.shape[0]:
        raise CurveMismatch("homotopies have different column counts")
    gap = float(np.max(np.abs(v1[:, -1] - v2[:, 0])))
    scale = max(1.0, float(np.abs(v1[:, -1]).max()))
    if gap > tol * scale:
        raise CurveMismatch(f"end curve and start curve differ by {gap:.3e}", gap=gap)
    v = np.concatenate([v1, v2[:, 1:]], axis=1)
    mesh = SurfaceMesh(v, s_params=h1.mesh.s_params)
    off = v1.shape[1] - 1
    stages = h1.stages + tuple(
        Stage(s.name, s.row_start + off, s.row_stop + off, s.area) for s in h2.stages
    )
    return Homotopy(mesh, stages)


def concat_all(parts) -> Homotopy:
    out = parts[0]
    for h in parts[1:]:
        out = concat_homotopies(out, h)
    return out
