"""Lagrangian fillings of curves with endpoints on a plane configuration.

Three situations, by the shape of the boundary configuration Gamma:

* a complex plane: move Gamma to the z1-plane and the end of the curve to
  the origin, decouple the curve into its z1 and z2 parts, then rotate the
  z2 loop into the z1-plane.  No condition on the curve.
* a Lagrangian plane: close the curve with the chord inside Gamma.  The
  resulting loop must have zero action; it is filled by :func:`fill_loop`.
* a transversal pair: join both endpoints to the origin.  With a complex
  face the loop is decoupled and rotated into that face; with two
  Lagrangian faces it must have zero action and is filled as a loop.

Every result is certified before it is returned: the isotropy residual and
the distance of the I_y boundary from Gamma are measured on the final
mesh.  A failing certificate triggers one retry at doubled resolution, then
:class:`~lagfill.errors.ResidualExceeded`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import defaults
from .curves import (
    Curve,
    WedgeReport,
    action_integral,
    augment_with_origin_segments,
    close_with_chord,
    double_across_complex,
    length,
    on_plane,
    refine_midpoints,
    resample_with_index,
    transform,
    translate,
)
from .errors import EndpointsNotOnGamma, NonZeroSymplecticArea, NotClosed, ResidualExceeded
from .geometry import Boundary, LinearMap4, Plane, PlaneKind, normalize_gamma
from .homotopies import (
    Homotopy,
    concat_all,
    contract_planar_zero_area_loop,
    decouple,
    rotate_tail,
)
from .surfaces import (
    EdgeRole,
    ResidualReport,
    Role,
    SurfaceMesh,
    cell_areas,
    cell_symplectic_areas,
    isotropy_residual,
)


class CaseTag(str, enum.Enum):
    LAGRANGIAN_HALF_DISK = "LagrangianHalfDisk"
    COMPLEX_HALF_DISK = "ComplexHalfDisk"
    WEDGE_PAIR = "WedgePair"
    LOOP_DISK = "LoopDisk"


@dataclass(frozen=True)
class Tolerances:
    action_rel: float = defaults.ACTION_REL
    boundary_abs: float = defaults.BOUNDARY_ABS
    residual_norm: float = defaults.RESIDUAL_NORM

    def __post_init__(self):
        if min(self.action_rel, self.boundary_abs, self.residual_norm) <= 0:
            raise ValueError("tolerances must be positive")


def default_grid(c: Curve) -> tuple[int, int]:
    ns = max(defaults.MIN_NS, 2 * c.n_segments)
    return ns, ns // 2


@dataclass(frozen=True, eq=False)
class FillRequest:
    gamma: Boundary
    curve: Curve
    grid: tuple | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    retry: bool = True

    def __post_init__(self):
        if self.grid is None:
            object.__setattr__(self, "grid", default_grid(self.curve))
        ns, nt = self.grid
        if ns < 16 or nt < 16:
            raise ValueError("grid dimensions must be at least 16")
        object.__setattr__(self, "grid", (int(ns), int(nt)))


@dataclass(frozen=True, eq=False)
class FillingResult:
    mesh: SurfaceMesh
    case_tag: CaseTag
    length: float
    area: float
    mu_ratio: float
    residuals: ResidualReport
    stage_areas: tuple
    I_input: float
    grid: tuple
    tolerances: Tolerances
    boundary_curve: Curve
    symplectic_area: float
    meta: dict = field(default_factory=dict)

    def to_json(self, mesh_file: str | None = None) -> dict:
        return {
            "case": self.case_tag.value,
            "length": self.length,
            "area": self.area,
            "mu_ratio": self.mu_ratio,
            "I_input": self.I_input,
            "stage_areas": [{"stage": n, "area": a} for n, a in self.stage_areas],
            "residuals": self.residuals.to_json(),
            "symplectic_area": self.symplectic_area,
            "grid": list(self.grid),
            "tolerances": {
                "action_rel": self.tolerances.action_rel,
                "boundary_abs": self.tolerances.boundary_abs,
                "residual_norm": self.tolerances.residual_norm,
            },
            "meta": self.meta,
            "mesh_file": mesh_file,
        }


@dataclass(frozen=True)
class Diagnosis:
    case_tag: CaseTag
    action: float
    unconditional: bool
    fillable: bool
    theta_min: float | None
    stage_budget: dict

    def to_json(self) -> dict:
        return {
            "case": self.case_tag.value,
            "action": self.action,
            "unconditional": self.unconditional,
            "fillable": self.fillable,
            "theta_min": self.theta_min,
            "stage_budget": self.stage_budget,
        }


# nominal per-stage constants in units of length(C)^2
_COMPLEX_BUDGET = {"decouple": 1.0, "rotate": math.pi}
# loop = C + chord has length <= 2L; the planar loop after decoupling <= 2 sqrt(2) L
_LOOP_BUDGET = {"decouple": 4.0, "rotate": 4.0 * math.pi, "contract": 16.0}


def _require_on(p, plane: Plane, what: str):
    if not on_plane(p, plane):
        raise EndpointsNotOnGamma(f"{what} is not on the {plane.kind.value} plane", point=list(map(float, p)))


def check_fillable(gamma: Boundary, c: Curve, action_rel: float = defaults.ACTION_REL) -> Diagnosis:
    """Classify the request and compute the action of the closed-up curve.

    Complex faces make filling unconditional; for purely Lagrangian
    configurations the closed loop must have zero action.
    """
    scale = length(c) ** 2
    if not gamma.is_pair:
        plane = gamma.planes[0]
        _require_on(c.start, plane, "start point")
        _require_on(c.end, plane, "end point")
        if plane.kind is PlaneKind.COMPLEX:
            a = action_integral(double_across_complex(c, plane))
            return Diagnosis(CaseTag.COMPLEX_HALF_DISK, a, True, True, None, dict(_COMPLEX_BUDGET))
        a = action_integral(close_with_chord(c))
        ok = abs(a) <= action_rel * scale
        return Diagnosis(CaseTag.LAGRANGIAN_HALF_DISK, a, False, ok, None, dict(_LOOP_BUDGET))
    loop, _ = augment_with_origin_segments(c, gamma)
    a = action_integral(loop)
    if gamma.has_complex:
        return Diagnosis(CaseTag.WEDGE_PAIR, a, True, True, gamma.theta_min, dict(_COMPLEX_BUDGET))
    ok = abs(a) <= action_rel * scale
    return Diagnosis(CaseTag.WEDGE_PAIR, a, False, ok, gamma.theta_min, dict(_LOOP_BUDGET))


def _n_segments(c: Curve, grid) -> int:
    return max(grid[0] // 2, c.n_segments)


def _map_back(h: Homotopy, u: LinearMap4 | None, shift) -> np.ndarray:
    v = h.mesh.vertices + np.asarray(shift, dtype=float)
    if u is not None:
        v = v @ u.inverse().matrix.T
    return v


def _stage_overruns(stage_areas: tuple, c_len: float) -> dict:
    """Stages whose area exceeds (1 + DELTA_MESH) x nominal budget, as area / budget.

    Overruns are reported, not failed; the total is judged by mu_ratio.
    """
    totals: dict = {}
    for name, a in stage_areas:
        key = name.split("_")[0]
        totals[key] = totals.get(key, 0.0) + a
    budget = _LOOP_BUDGET if "contract" in totals else _COMPLEX_BUDGET
    out = {}
    for key, a in totals.items():
        cap = budget.get(key, math.inf) * c_len**2
        if a > (1.0 + defaults.DELTA_MESH) * cap:
            out[key] = a / cap
    return out


def _stage_areas(ca: np.ndarray, h: Homotopy) -> tuple:
    return tuple((s.name, float(ca[:, s.row_start : s.row_stop].sum())) for s in h.stages)


def _loop_homotopy(loop0: Curve, nt: int, action_rel: float) -> Homotopy:
    """decouple -> rotate z2 part into z1 -> contract, for a loop based at the origin."""
    n = loop0.n_segments
    h1 = decouple(loop0, nt)
    h2 = rotate_tail(h1.end_curve, n, nt)
    planar = Curve.from_points(h2.end_curve.points, h2.mesh.s_params, closed=True)
    h3 = contract_planar_zero_area_loop(planar, nt, tol=action_rel)
    return concat_all([h1, h2, h3])


def _certify(
    vertices: np.ndarray,
    h: Homotopy,
    roles: tuple,
    declared: Curve,
    gamma: Boundary | None,
    c_len: float,
    i_input: float,
    tag: CaseTag,
    grid,
    tol: Tolerances,
    meta: dict,
) -> FillingResult:
    mesh = SurfaceMesh(vertices, s_params=h.mesh.s_params, t_params=h.mesh.t_params, roles=roles)
    s_minus = [r for r in roles if r.role is Role.S_MINUS][0]
    ref = Curve.from_points(
        declared.points[s_minus.start : s_minus.stop + 1],
        np.linspace(0.0, 1.0, s_minus.stop - s_minus.start + 1),
    )
    ca, cs = cell_areas(mesh), cell_symplectic_areas(mesh)
    res = isotropy_residual(mesh, gamma=gamma, curve=ref, cells=(ca, cs))
    scale = 1.0 + float(np.abs(declared.points).max())
    if res.normalized_isotropy > tol.residual_norm or res.boundary_gamma_distance > tol.boundary_abs * scale:
        raise ResidualExceeded(
            f"normalized isotropy {res.normalized_isotropy:.3e}, "
            f"boundary distance {res.boundary_gamma_distance:.3e}",
            normalized_isotropy=res.normalized_isotropy,
            boundary_gamma_distance=res.boundary_gamma_distance,
            grid=list(grid),
        )
    area = float(ca.sum())
    stages = _stage_areas(ca, h)
    meta = {**meta, "stage_overruns": _stage_overruns(stages, c_len)}
    return FillingResult(
        mesh=mesh,
        case_tag=tag,
        length=c_len,
        area=area,
        mu_ratio=area / c_len**2 if c_len > 0 else 0.0,
        residuals=res,
        stage_areas=stages,
        I_input=i_input,
        grid=tuple(grid),
        tolerances=tol,
        boundary_curve=ref,
        symplectic_area=float(cs.sum()),
        meta=meta,
    )


def _with_retry(build, grid, retry: bool):
    try:
        return build(grid)
    except ResidualExceeded:
        if not retry:
            raise
        return build((2 * grid[0], 2 * grid[1]))


def _edge_roles(ns1: int, nt1: int, bottom: list, sides: Role, top: Role) -> tuple:
    roles = [EdgeRole("bottom", a, b, r) for a, b, r in bottom]
    roles += [EdgeRole("left", 0, nt1 - 1, sides), EdgeRole("right", 0, nt1 - 1, sides)]
    roles.append(EdgeRole("top", 0, ns1 - 1, top))
    return tuple(roles)


def fill_complex_half_disk(
    plane: Plane, c: Curve, grid=None, tol: Tolerances | None = None, retry: bool = True
) -> FillingResult:
    """Lagrangian half disk for a curve with endpoints on a complex plane.

    The bottom edge of the mesh is ``c`` (midpoint-refined resampling), the
    other three edges lie in the plane.  Area <= (1 + pi) length(c)^2 up to
    discretization.
    """
    tol = tol or Tolerances()
    grid = grid or default_grid(c)
    if plane.kind is not PlaneKind.COMPLEX:
        raise ValueError("fill_complex_half_disk needs a complex plane")
    _require_on(c.start, plane, "start point")
    _require_on(c.end, plane, "end point")
    gamma = Boundary.one(plane)
    u, _ = normalize_gamma(gamma)
    c_len = length(c)
    i_input = action_integral(c)

    def build(g):
        n = _n_segments(c, g)
        cr, _ = resample_with_index(c, n)
        declared = refine_midpoints(cr)
        pts = transform(cr, u).points.copy()
        pts[0, 2:] = 0.0
        pts[-1, 2:] = 0.0
        shift = pts[-1].copy()
        alpha = Curve(pts - shift, cr.params)
        h1 = decouple(alpha, g[1])
        h2 = rotate_tail(h1.end_curve, n, g[1])
        h = concat_all([h1, h2])
        v = _map_back(h, u, shift)
        v[:, 0] = declared.points
        ns1, nt1 = v.shape[:2]
        roles = _edge_roles(ns1, nt1, [(0, ns1 - 1, Role.S_MINUS)], Role.I_Y, Role.I_Y)
        meta = {"plane": plane.to_json()}
        return _certify(v, h, roles, declared, gamma, c_len, i_input, CaseTag.COMPLEX_HALF_DISK, g, tol, meta)

    return _with_retry(build, grid, retry)


def fill_loop(loop: Curve, grid=None, tol: Tolerances | None = None, retry: bool = True) -> FillingResult:
    """Lagrangian disk spanning a closed loop of zero action.

    The mesh's bottom edge is the loop, its side edges are glued and its top
    edge collapses to a point, so the square closes up to a disk.
    """
    tol = tol or Tolerances()
    grid = grid or default_grid(loop)
    if not loop.closed:
        raise NotClosed("fill_loop needs a closed curve")
    l_len = length(loop)
    i_input = action_integral(loop)
    if abs(i_input) > tol.action_rel * l_len**2:
        raise NonZeroSymplecticArea(
            f"loop has symplectic area {i_input:.6g}", action=i_input, length=l_len
        )

    def build(g):
        n = _n_segments(loop, g)
        lr, _ = resample_with_index(loop, n)
        declared = refine_midpoints(lr)
        base = lr.start.copy()
        h = _loop_homotopy(translate(lr, -base), g[1], tol.action_rel)
        v = _map_back(h, None, base)
        v[:, 0] = declared.points
        ns1, nt1 = v.shape[:2]
        roles = _edge_roles(ns1, nt1, [(0, ns1 - 1, Role.S_MINUS)], Role.GLUED, Role.FREE)
        return _certify(v, h, roles, declared, None, l_len, i_input, CaseTag.LOOP_DISK, g, tol, {})

    return _with_retry(build, grid, retry)


def fill_lagrangian_half_disk(
    plane: Plane, c: Curve, grid=None, tol: Tolerances | None = None, retry: bool = True
) -> FillingResult:
    """Lagrangian half disk for a curve with endpoints on a Lagrangian plane.

    Requires the curve closed by its chord in the plane to have zero action.
    The chord becomes the I_y part of the boundary; the loop is filled as in
    :func:`fill_loop`.
    """
    tol = tol or Tolerances()
    grid = grid or default_grid(c)
    if plane.kind is not PlaneKind.LAGRANGIAN:
        raise ValueError("fill_lagrangian_half_disk needs a Lagrangian plane")
    _require_on(c.start, plane, "start point")
    _require_on(c.end, plane, "end point")
    gamma = Boundary.one(plane)
    c_len = length(c)
    loop = close_with_chord(c)
    i_input = action_integral(loop)
    if abs(i_input) > tol.action_rel * c_len**2:
        raise NonZeroSymplecticArea(
            f"curve closed by its chord has symplectic area {i_input:.6g}", action=i_input, length=c_len
        )
    u, _ = normalize_gamma(gamma)
    chord = float(np.linalg.norm(c.end - c.start))

    def build(g):
        n = _n_segments(loop, g)
        lr, index = resample_with_index(loop, n)
        declared = refine_midpoints(lr)
        j = 2 * int(index[c.n_segments])
        lt = transform(lr, u)
        base = lt.start.copy()
        h = _loop_homotopy(translate(lt, -base), g[1], tol.action_rel)
        v = _map_back(h, u, base)
        v[:, 0] = declared.points
        v[-1, :] = v[0, :]
        ns1, nt1 = v.shape[:2]
        bottom = [(0, j, Role.S_MINUS), (j, ns1 - 1, Role.I_Y)]
        roles = _edge_roles(ns1, nt1, bottom, Role.GLUED, Role.FREE)
        meta = {"chord_length": chord, "chord_ok": chord <= c_len}
        return _certify(v, h, roles, declared, gamma, c_len, i_input, CaseTag.LAGRANGIAN_HALF_DISK, g, tol, meta)

    return _with_retry(build, grid, retry)


def _wedge_meta(report: WedgeReport, gamma: Boundary, face_of_top: int | None) -> dict:
    return {
        "theta_min": report.theta_min,
        "endpoint_norms": list(report.endpoint_norms),
        "csc_bound": report.csc_bound,
        "csc_bound_ok": report.bound_ok,
        # I_y split at the origin corner: first bottom piece on face 0, last on face 1
        "I_y_faces": {"bottom_head": 0, "bottom_tail": 1, "top": face_of_top},
        "kinds": [p.kind.value for p in gamma.planes],
    }


def fill_wedge_pair(
    gamma: Boundary, c: Curve, grid=None, tol: Tolerances | None = None, retry: bool = True
) -> FillingResult:
    """Lagrangian wedge for a curve running from plane 0 to plane 1 of a pair.

    Straight segments from the origin to both endpoints close the curve into
    a loop.  With a complex face the loop is decoupled and rotated into that
    face; with two Lagrangian faces it must have zero action and is filled
    as a loop.
    """
    tol = tol or Tolerances()
    grid = grid or default_grid(c)
    loop, report = augment_with_origin_segments(c, gamma)
    c_len = length(c)
    i_input = action_integral(loop)
    if not gamma.has_complex and abs(i_input) > tol.action_rel * c_len**2:
        raise NonZeroSymplecticArea(
            f"wedge loop has symplectic area {i_input:.6g}", action=i_input, length=c_len
        )
    u, _ = normalize_gamma(gamma)

    def build(g):
        n = _n_segments(loop, g)
        lr, index = resample_with_index(loop, n)
        declared = refine_midpoints(lr)
        j1, j2 = 2 * int(index[1]), 2 * int(index[c.n_segments + 1])
        lt = transform(lr, u)
        if gamma.has_complex:
            h1 = decouple(lt, g[1])
            h = concat_all([h1, rotate_tail(h1.end_curve, n, g[1])])
            sides, top, top_face = Role.I_Y, Role.I_Y, gamma.primary_index
        else:
            h = _loop_homotopy(lt, g[1], tol.action_rel)
            sides, top, top_face = Role.GLUED, Role.FREE, None
        v = _map_back(h, u, np.zeros(4))
        v[:, 0] = declared.points
        if sides is Role.GLUED:
            v[-1, :] = v[0, :]
        ns1, nt1 = v.shape[:2]
        bottom = [(0, j1, Role.I_Y), (j1, j2, Role.S_MINUS), (j2, ns1 - 1, Role.I_Y)]
        roles = _edge_roles(ns1, nt1, bottom, sides, top)
        meta = _wedge_meta(report, gamma, top_face)
        return _certify(v, h, roles, declared, gamma, c_len, i_input, CaseTag.WEDGE_PAIR, g, tol, meta)

    return _with_retry(build, grid, retry)


def fill(request: FillRequest) -> FillingResult:
    gamma, c = request.gamma, request.curve
    if gamma.is_pair:
        return fill_wedge_pair(gamma, c, request.grid, request.tolerances, request.retry)
    plane = gamma.planes[0]
    if plane.kind is PlaneKind.COMPLEX:
        return fill_complex_half_disk(plane, c, request.grid, request.tolerances, request.retry)
    return fill_lagrangian_half_disk(plane, c, request.grid, request.tolerances, request.retry)
