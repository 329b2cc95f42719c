"""File formats: boundary JSON, curve CSV/JSON, mesh JSON/OBJ, ensemble CSV.

Floats are written with ``repr`` (shortest round-trip decimal), so reading
back gives the same doubles bit for bit.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .curves import Curve
from .errors import KindViolation
from .geometry import Boundary, PlaneKind, validate_plane
from .surfaces import EDGES, EdgeRole, Role, SurfaceMesh

CURVE_COLUMNS = ("s", "x1", "y1", "x2", "y2")
COORDS = ("x1", "y1", "x2", "y2")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _plane_from_frame(frame, kind=None):
    u, v = frame
    if kind is not None:
        return validate_plane(u, v, kind)
    try:
        return validate_plane(u, v, PlaneKind.COMPLEX)
    except KindViolation:
        return validate_plane(u, v, PlaneKind.LAGRANGIAN)


def gamma_from_json(d: dict) -> Boundary:
    """Parse ``{"type": "complex"|"lagrangian"|"pair", "frame": [...], "frame2": [...]}``.

    For pairs, plane kinds are taken from an optional ``"kinds"`` list or
    inferred from the frames.
    """
    t = d["type"]
    if t in ("complex", "lagrangian"):
        return Boundary.one(validate_plane(*d["frame"], t))
    if t == "pair":
        kinds = d.get("kinds", [None, None])
        return Boundary.pair(_plane_from_frame(d["frame"], kinds[0]), _plane_from_frame(d["frame2"], kinds[1]))
    raise ValueError(f"unknown boundary type {t!r}")


def gamma_to_json(gamma: Boundary) -> dict:
    if not gamma.is_pair:
        p = gamma.planes[0]
        return {"type": p.kind.value, "frame": p.to_json()}
    p1, p2 = gamma.planes
    return {
        "type": "pair",
        "frame": p1.to_json(),
        "frame2": p2.to_json(),
        "kinds": [p1.kind.value, p2.kind.value],
    }


def read_gamma(path) -> Boundary:
    return gamma_from_json(json.loads(Path(path).read_text()))


def write_gamma(gamma: Boundary, path):
    Path(path).write_text(dumps(gamma_to_json(gamma)))


def _curve(s, pts, closed=None) -> Curve:
    pts = np.asarray(pts, dtype=float).reshape(-1, 4)
    return Curve.from_points(pts, np.asarray(s, dtype=float), closed)


def curve_to_json(c: Curve) -> dict:
    d = {"s": c.params.tolist()}
    for k, name in enumerate(COORDS):
        d[name] = c.points[:, k].tolist()
    d["closed"] = c.closed
    return d


def curve_from_json(d: dict) -> Curve:
    pts = np.column_stack([d[name] for name in COORDS])
    return _curve(d["s"], pts, d.get("closed"))


def write_curve_csv(c: Curve, path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CURVE_COLUMNS)
        for s, p in zip(c.params, c.points):
            w.writerow([repr(float(s))] + [repr(float(x)) for x in p])


def read_curve_csv(path) -> Curve:
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    header = [h.strip() for h in rows[0]]
    if tuple(header) != CURVE_COLUMNS:
        raise ValueError(f"curve CSV header must be {','.join(CURVE_COLUMNS)}")
    data = np.array([[float(x) for x in r] for r in rows[1:] if r], dtype=float)
    return _curve(data[:, 0], data[:, 1:])


def read_curve(path) -> Curve:
    path = Path(path)
    if path.suffix.lower() == ".json":
        return curve_from_json(json.loads(path.read_text()))
    return read_curve_csv(path)


def write_curve(c: Curve, path):
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(dumps(curve_to_json(c)))
    else:
        write_curve_csv(c, path)


def mesh_to_json(m: SurfaceMesh) -> dict:
    roles = {e: [r.to_json() for r in m.roles if r.edge == e] for e in EDGES}
    return {
        "dims": list(m.dims),
        "vertices": m.vertices.reshape(-1).tolist(),
        "roles": {e: v for e, v in roles.items() if v},
        "s_params": m.s_params.tolist(),
        "t_params": m.t_params.tolist(),
        "chart": m.chart,
    }


def mesh_from_json(d: dict) -> SurfaceMesh:
    ns1, nt1 = d["dims"]
    v = np.asarray(d["vertices"], dtype=float).reshape(ns1, nt1, 4)
    roles = tuple(
        EdgeRole(e, int(a), int(b), Role(r)) for e, items in d.get("roles", {}).items() for a, b, r in items
    )
    return SurfaceMesh(v, d.get("s_params"), d.get("t_params"), roles, d.get("chart"))


def write_mesh(m: SurfaceMesh, path):
    Path(path).write_text(json.dumps(mesh_to_json(m), allow_nan=False))


def read_mesh(path) -> SurfaceMesh:
    return mesh_from_json(json.loads(Path(path).read_text()))


def write_obj(m: SurfaceMesh, path, drop: str = "y2"):
    """Triangulated 3D projection for viewers; one coordinate is dropped."""
    keep = [k for k, name in enumerate(COORDS) if name != drop]
    if len(keep) != 3:
        raise ValueError(f"drop must be one of {COORDS}")
    ns1, nt1 = m.dims
    v = m.vertices[:, :, keep].reshape(-1, 3)
    idx = np.arange(ns1 * nt1).reshape(ns1, nt1) + 1
    a, b, c, d = idx[:-1, :-1], idx[1:, :-1], idx[1:, 1:], idx[:-1, 1:]
    with open(path, "w") as f:
        f.write(f"# lagfill mesh {ns1}x{nt1}, dropped {drop}\n")
        for x in v:
            f.write("v %r %r %r\n" % tuple(float(t) for t in x))
        for tri in np.concatenate(
            [np.stack([a, b, c], -1).reshape(-1, 3), np.stack([a, c, d], -1).reshape(-1, 3)]
        ):
            f.write("f %d %d %d\n" % tuple(tri))


ENSEMBLE_COLUMNS = ("run", "seed", "case", "length", "area", "mu_ratio", "residual_norm", "I_input", "outcome")


def write_ensemble_csv(report, path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(ENSEMBLE_COLUMNS)
        for r in report.records:
            row = []
            for col in ENSEMBLE_COLUMNS:
                val = getattr(r, col)
                row.append(repr(val) if isinstance(val, float) else ("" if val is None else val))
            w.writerow(row)
