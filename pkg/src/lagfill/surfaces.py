"""Grid surfaces: areas, isotropy residuals and boundary bookkeeping.

A :class:`SurfaceMesh` stores vertices ``H[i, j]`` on an ``(Ns+1, Nt+1)``
grid, ``i`` along the curve parameter ``s`` and ``j`` along the homotopy
time ``t``.  Each cell ``(i, j)`` is cut along the ``(i, j) -> (i+1, j+1)``
diagonal into the triangles ``(a, b, c)`` and ``(a, c, d)`` with::

    a = H[i, j]   b = H[i+1, j]   c = H[i+1, j+1]   d = H[i, j+1]

Both triangles are positively oriented in the (s, t) square.  The symplectic
form has constant coefficients, so its integral over an affine triangle is
exactly ``1/2 omega(b - a, c - a)``; summing gives the action of the
boundary loop (discrete Stokes) up to rounding.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .curves import Curve
from .errors import MissingRole, UnknownEdge
from .geometry import Boundary, symplectic_form

EDGES = ("bottom", "right", "top", "left")


class Role(str, enum.Enum):
    S_MINUS = "S_minus"
    I_Y = "I_y"
    GLUED = "Glued"
    FREE = "Free"


@dataclass(frozen=True)
class EdgeRole:
    """Role of the vertex range ``start..stop`` (inclusive) of one edge."""

    edge: str
    start: int
    stop: int
    role: Role

    def to_json(self) -> list:
        return [self.start, self.stop, self.role.value]


@dataclass(frozen=True, eq=False)
class SurfaceMesh:
    vertices: np.ndarray
    s_params: np.ndarray | None = None
    t_params: np.ndarray | None = None
    roles: tuple = ()
    chart: dict | None = None

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 3 or v.shape[2] != 4 or v.shape[0] < 2 or v.shape[1] < 2:
            raise ValueError(f"vertices must have shape (Ns+1, Nt+1, 4), Ns, Nt >= 1; got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite mesh vertex")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        for name, n in (("s_params", v.shape[0]), ("t_params", v.shape[1])):
            p = getattr(self, name)
            p = np.linspace(0.0, 1.0, n) if p is None else np.array(p, dtype=float)
            if p.shape != (n,) or p[0] != 0.0 or p[-1] != 1.0 or np.any(np.diff(p) <= 0):
                raise ValueError(f"{name} must increase strictly from 0 to 1")
            p.setflags(write=False)
            object.__setattr__(self, name, p)
        roles = tuple(self.roles)
        object.__setattr__(self, "roles", roles)
        for r in roles:
            if r.edge not in EDGES:
                raise UnknownEdge(r.edge)
            if not 0 <= r.start < r.stop < self.edge_size(r.edge):
                raise ValueError(f"bad vertex range on {r.edge}: {r.start}..{r.stop}")
        if sum(r.role is Role.S_MINUS for r in roles) > 1:
            raise ValueError("at most one S_minus segment")
        glued = [r for r in roles if r.role is Role.GLUED]
        if glued:
            edges = sorted(r.edge for r in glued)
            if edges != ["left", "right"] or not np.array_equal(v[0], v[-1]):
                raise ValueError("glued edges must be left/right with identical vertices")

    @property
    def dims(self) -> tuple[int, int]:
        return self.vertices.shape[0], self.vertices.shape[1]

    def edge_size(self, edge: str) -> int:
        if edge in ("bottom", "top"):
            return self.vertices.shape[0]
        if edge in ("left", "right"):
            return self.vertices.shape[1]
        raise UnknownEdge(edge)

    def with_roles(self, roles) -> "SurfaceMesh":
        return replace(self, roles=tuple(roles))


def roles_whole_edges(mesh_or_dims, mapping: dict) -> tuple:
    """EdgeRole records covering whole edges, e.g. ``{"bottom": Role.S_MINUS}``."""
    ns1, nt1 = mesh_or_dims.dims if isinstance(mesh_or_dims, SurfaceMesh) else mesh_or_dims
    sizes = {"bottom": ns1, "top": ns1, "left": nt1, "right": nt1}
    return tuple(EdgeRole(e, 0, sizes[e] - 1, Role(r)) for e, r in mapping.items())


def _cell_corners(m: SurfaceMesh):
    v = m.vertices
    return v[:-1, :-1], v[1:, :-1], v[1:, 1:], v[:-1, 1:]


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def _triangle_area(e1, e2):
    g = _dot(e1, e1) * _dot(e2, e2) - _dot(e1, e2) ** 2
    return 0.5 * np.sqrt(np.maximum(g, 0.0))


def cell_areas(m: SurfaceMesh) -> np.ndarray:
    a, b, c, d = _cell_corners(m)
    return _triangle_area(b - a, c - a) + _triangle_area(c - a, d - a)


def cell_symplectic_areas(m: SurfaceMesh) -> np.ndarray:
    a, b, c, d = _cell_corners(m)
    return 0.5 * (symplectic_form(b - a, c - a) + symplectic_form(c - a, d - a))


def euclidean_area(m: SurfaceMesh) -> float:
    return float(cell_areas(m).sum())


def symplectic_area(m: SurfaceMesh) -> float:
    return float(cell_symplectic_areas(m).sum())


def boundary_trace(m: SurfaceMesh, edge: str) -> Curve:
    """Edge polyline oriented by increasing parameter."""
    v = m.vertices
    if edge == "bottom":
        return Curve.from_points(v[:, 0], m.s_params)
    if edge == "top":
        return Curve.from_points(v[:, -1], m.s_params)
    if edge == "left":
        return Curve.from_points(v[0, :], m.t_params)
    if edge == "right":
        return Curve.from_points(v[-1, :], m.t_params)
    raise UnknownEdge(edge)


def boundary_loop(m: SurfaceMesh) -> Curve:
    """Counterclockwise boundary of the parameter square: bottom, right, top back, left back."""
    v = m.vertices
    pts = np.concatenate([v[:, 0], v[-1, 1:], v[-2::-1, -1], v[0, -2::-1]])
    pts[-1] = pts[0]
    return Curve.from_points(pts, closed=True)


def segment_trace(m: SurfaceMesh, r: EdgeRole) -> Curve:
    full = boundary_trace(m, r.edge)
    pts = full.points[r.start : r.stop + 1]
    prm = full.params[r.start : r.stop + 1]
    prm = (prm - prm[0]) / (prm[-1] - prm[0])
    prm[-1] = 1.0
    return Curve.from_points(pts, prm)


def role_traces(m: SurfaceMesh, role) -> list[Curve]:
    role = Role(role)
    return [segment_trace(m, r) for r in m.roles if r.role is role]


def gamma_distance(c: Curve, gamma: Boundary) -> float:
    """Largest distance from a vertex of ``c`` to the nearest plane of ``gamma``."""
    return float(np.max(gamma.distance(c.points)))


@dataclass(frozen=True)
class ResidualReport:
    max_cell_isotropy: float = 0.0
    rms_cell_isotropy: float = 0.0
    normalized_isotropy: float = 0.0
    boundary_gamma_distance: float = 0.0
    boundary_curve_distance: float = 0.0

    def to_json(self) -> dict:
        return {k: float(v) for k, v in self.__dict__.items()}


def isotropy_residual(
    m: SurfaceMesh, gamma: Boundary | None = None, curve: Curve | None = None, cells=None
) -> ResidualReport:
    """Aggregate per-cell symplectic areas; zero for an exactly isotropic mesh.

    When ``gamma`` is given the I_y traces are measured against it; when
    ``curve`` is given the S_minus trace is compared to it vertex by vertex.
    ``cells`` optionally supplies precomputed ``(cell_areas, cell_symplectic_areas)``.
    """
    ca, cs = cells if cells is not None else (cell_areas(m), cell_symplectic_areas(m))
    w = np.abs(cs)
    total = ca.sum()
    normalized = float(w.sum() / total) if total > 0 else 0.0
    gd = 0.0
    if gamma is not None:
        gd = max((gamma_distance(c, gamma) for c in role_traces(m, Role.I_Y)), default=0.0)
    cd = 0.0
    if curve is not None:
        traces = role_traces(m, Role.S_MINUS)
        if not traces:
            raise MissingRole("mesh has no S_minus segment")
        t = traces[0]
        if len(t) != len(curve):
            cd = float("inf")
        else:
            cd = float(np.max(np.linalg.norm(t.points - curve.points, axis=1)))
    return ResidualReport(
        max_cell_isotropy=float(w.max()),
        rms_cell_isotropy=float(np.sqrt(np.mean(w**2))),
        normalized_isotropy=normalized,
        boundary_gamma_distance=float(gd),
        boundary_curve_distance=cd,
    )


def _ccw_segments(m: SurfaceMesh) -> list[EdgeRole]:
    # boundary order: bottom, right, top (reversed), left (reversed)
    order = {"bottom": 0, "right": 1, "top": 2, "left": 3}
    forward = {"bottom": True, "right": True, "top": False, "left": False}
    segs = sorted(m.roles, key=lambda r: (order[r.edge], r.start if forward[r.edge] else -r.start))
    return segs


def to_half_disk(m: SurfaceMesh) -> SurfaceMesh:
    """Attach the square -> half-disk boundary correspondence as chart metadata.

    The S_minus segment is sent onto the circular arc of the left half disk
    and the I_y segments, in counterclockwise order, onto consecutive pieces
    of the diameter; Glued and Free edges are interior.  Vertex positions are
    untouched, so areas and residuals do not change.
    """
    if m.chart is not None and m.chart.get("domain") == "half_disk":
        return m
    segs = _ccw_segments(m)
    s_minus = [r for r in segs if r.role is Role.S_MINUS]
    if not s_minus:
        raise MissingRole("to_half_disk needs an S_minus segment")
    k = segs.index(s_minus[0])
    i_y = [r for r in segs[k + 1 :] + segs[:k] if r.role is Role.I_Y]
    chart = {
        "domain": "half_disk",
        "S_minus": [s_minus[0].edge, s_minus[0].start, s_minus[0].stop],
        "I_y": [[r.edge, r.start, r.stop] for r in i_y],
    }
    return replace(m, chart=chart)
