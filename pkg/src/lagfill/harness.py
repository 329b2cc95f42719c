"""Random test curves, area compensation, ensembles and refinement studies."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .curves import (
    Curve,
    action_integral,
    augment_with_origin_segments,
    close_with_chord,
    concat,
    length,
)
from .errors import LagfillError
from .filler import FillRequest, FillingResult, Tolerances, fill
from .geometry import Boundary, PlaneKind, as_vec4, real_plane, validate_plane, z1_plane, z2_plane

CASES = ("complex", "lagrangian", "wedge", "wedge_lagrangian")
GADGET_SEGMENTS = 64
# normalized residuals below this are rounding noise
RESIDUAL_FLOOR = 1e-12


def case_gamma(case: str) -> Boundary:
    """The fixed boundary configuration used for each ensemble case."""
    if case == "complex":
        return Boundary.one(z1_plane())
    if case == "lagrangian":
        return Boundary.one(real_plane())
    if case == "wedge":
        return Boundary.pair(z1_plane(), z2_plane())
    if case == "wedge_lagrangian":
        # {y = 0} and its image under J, {x = 0}
        imag = validate_plane([0, 1, 0, 0], [0, 0, 0, 1], PlaneKind.LAGRANGIAN)
        return Boundary.pair(real_plane(), imag)
    raise ValueError(f"unknown case {case!r}; expected one of {CASES}")


def fourier_curve(coeffs1: dict, coeffs2: dict, samples: int = 256, span: float = 1.0) -> Curve:
    """Sample z^k(s) = sum_m c_m exp(2 pi i m span s) at ``samples + 1`` points.

    ``span = 1`` gives a closed curve (last point set equal to the first).
    """
    s = np.linspace(0.0, 1.0, samples + 1)
    pts = np.zeros((samples + 1, 4))
    for k, coeffs in enumerate((coeffs1, coeffs2)):
        z = np.zeros(samples + 1, dtype=complex)
        for m, c in sorted(coeffs.items()):
            z += complex(c) * np.exp(2j * np.pi * m * span * s)
        pts[:, 2 * k] = z.real
        pts[:, 2 * k + 1] = z.imag
    closed = span == 1.0
    if closed:
        pts[-1] = pts[0]
    return Curve(pts, s, closed)


def _random_coeffs(rng: np.random.Generator, modes: int, scale: float) -> dict:
    out = {}
    for m in range(1, modes + 1):
        for sgn in (1, -1):
            re, im = rng.standard_normal(2)
            out[sgn * m] = scale * complex(re, im) / m**2
    return out


def gen_fourier_curve(seed: int, modes: int = 6, scale: float = 1.0, constraint="loop", samples: int = 256) -> Curve:
    """Random smooth curve with Fourier coefficients decaying like 1/k^2.

    ``constraint`` is ``"loop"`` (closed loop based at the origin) or a
    :class:`Boundary`; for a boundary the curve is open and an affine
    correction moves its start onto the first plane and its end onto the
    last one.
    """
    if modes < 1:
        raise ValueError("modes must be >= 1")
    rng = np.random.default_rng(seed)
    c1 = _random_coeffs(rng, modes, scale)
    c2 = _random_coeffs(rng, modes, scale)
    if constraint == "loop":
        c = fourier_curve(c1, c2, samples, span=1.0)
        pts = c.points - c.points[0]
        pts[0] = pts[-1] = 0.0
        return Curve(pts, c.params, True)
    if not isinstance(constraint, Boundary):
        raise ValueError(f"unknown constraint {constraint!r}")
    c = fourier_curve(c1, c2, samples, span=0.5)
    first, last = constraint.planes[0], constraint.planes[-1]
    p, q = c.points[0], c.points[-1]
    p2, q2 = first.project(p), last.project(q)
    s = c.params[:, None]
    pts = c.points + (1.0 - s) * (p2 - p) + s * (q2 - q)
    pts[0], pts[-1] = p2, q2
    return Curve(pts, c.params)


def closing_action(c: Curve, gamma: Boundary) -> float:
    """Action of the loop obtained by closing ``c`` inside ``gamma``."""
    if gamma.is_pair:
        return action_integral(augment_with_origin_segments(c, gamma)[0])
    return action_integral(close_with_chord(c))


def gadget_loop(base, area: float, segments: int = GADGET_SEGMENTS) -> Curve:
    """Regular polygon in the z1-direction through ``base`` with signed action ``area``.

    The radius is fitted to the inscribed polygon area (n/2) r^2 sin(2 pi / n)
    so the action matches exactly rather than to O(1/n^2).
    """
    base = as_vec4(base)
    sign = 1.0 if area >= 0 else -1.0
    r = math.sqrt(abs(area) / (0.5 * segments * math.sin(2 * math.pi / segments)))
    th = sign * 2 * np.pi * np.arange(segments + 1) / segments
    pts = np.repeat(base[None, :], segments + 1, axis=0)
    pts[:, 0] += r * (np.cos(th) - 1.0)
    pts[:, 1] += r * np.sin(th)
    pts[0] = pts[-1] = base
    return Curve(pts, np.linspace(0.0, 1.0, segments + 1), True)


def compensate_area(c: Curve, gamma: Boundary, segments: int = GADGET_SEGMENTS) -> Curve:
    """Append a loop at the end of ``c`` cancelling its closing action.

    The gadget lies in the z1-direction whatever ``gamma`` is; it belongs to
    the curve, not to the part of the boundary on ``gamma``.
    """
    a = closing_action(c, gamma)
    if a == 0.0:
        return c
    return concat(c, gadget_loop(c.end, -a, segments), closed=False)


def compensate_loop(c: Curve, segments: int = GADGET_SEGMENTS) -> Curve:
    """Append a loop at the basepoint of the closed curve ``c`` cancelling its action."""
    if not c.closed:
        raise ValueError("compensate_loop needs a closed curve")
    a = action_integral(c)
    if a == 0.0:
        return c
    return concat(c, gadget_loop(c.start, -a, segments), closed=True)


@dataclass
class RunRecord:
    run: int
    seed: int
    case: str
    length: float
    area: float
    mu_ratio: float
    residual_norm: float
    I_input: float
    outcome: str
    stage_areas: list = field(default_factory=list)


@dataclass
class EnsembleReport:
    case: str
    seed: int
    grid: list
    modes: int
    records: list
    mu_max: float | None
    mu_mean: float | None
    mu_p95: float | None
    failures: int

    def to_json(self) -> dict:
        return asdict(self)


def _record(i: int, seed: int, case: str, res: FillingResult) -> RunRecord:
    return RunRecord(
        run=i,
        seed=seed,
        case=case,
        length=res.length,
        area=res.area,
        mu_ratio=res.mu_ratio,
        residual_norm=res.residuals.normalized_isotropy,
        I_input=res.I_input,
        outcome="ok",
        stage_areas=[[n, a] for n, a in res.stage_areas],
    )


def ensemble_curve(case: str, seed: int, modes: int = 6, samples: int = 256) -> tuple[Boundary, Curve]:
    gamma = case_gamma(case)
    c = gen_fourier_curve(seed, modes, 1.0, gamma, samples)
    if not gamma.has_complex:
        c = compensate_area(c, gamma)
    return gamma, c


def run_seeds(seed: int, n: int) -> list[int]:
    return [int(ss.generate_state(1)[0]) for ss in np.random.SeedSequence(seed).spawn(n)]


def estimate_mu(
    case: str,
    n_runs: int,
    seed: int = 0,
    grid=(512, 256),
    modes: int = 6,
    samples: int = 256,
    tol: Tolerances | None = None,
) -> EnsembleReport:
    """Fill ``n_runs`` random admissible curves and aggregate mu = area / length^2.

    Per-run errors become records with the error name as outcome.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    tol = tol or Tolerances()
    records = []
    for i, s in enumerate(run_seeds(seed, n_runs)):
        gamma, c = ensemble_curve(case, s, modes, samples)
        try:
            res = fill(FillRequest(gamma, c, tuple(grid), tol))
            records.append(_record(i, s, case, res))
        except LagfillError as e:
            records.append(RunRecord(i, s, case, length(c), None, None, None, None, type(e).__name__))
    mus = np.array([r.mu_ratio for r in records if r.outcome == "ok"])
    failures = sum(r.outcome != "ok" for r in records)
    if len(mus):
        agg = float(mus.max()), float(mus.mean()), float(np.percentile(mus, 95))
    else:
        agg = (None, None, None)
    return EnsembleReport(case, seed, list(grid), modes, records, *agg, failures)


@dataclass
class RefineLevel:
    grid: list
    normalized_isotropy: float
    area: float
    mu_ratio: float


@dataclass
class RefineTable:
    levels: list
    residual_slope: float | None
    area_rel_change: float

    @property
    def at_floor(self) -> bool:
        return all(x.normalized_isotropy <= RESIDUAL_FLOOR for x in self.levels)

    def to_json(self) -> dict:
        return asdict(self)


def refine_study(gamma: Boundary, c, levels: int = 3, grid=(128, 64), tol: Tolerances | None = None) -> RefineTable:
    """Fill at successively doubled grids; fit the log-log slope of the residual.

    ``c`` is a fixed :class:`Curve` or a callable ``samples -> Curve``; the
    callable form re-samples a smooth source at each level (``Ns / 2``
    segments) so input resolution keeps pace with the mesh.  Levels run
    without the doubled-grid retry.  The slope is ``None`` when every level
    is isotropic to within ``RESIDUAL_FLOOR``: a fit through rounding noise
    carries no convergence information.
    """
    if levels < 3:
        raise ValueError("levels must be >= 3")
    tol = tol or Tolerances()
    rows = []
    for k in range(levels):
        g = (grid[0] * 2**k, grid[1] * 2**k)
        curve = c if isinstance(c, Curve) else c(g[0] // 2)
        res = fill(FillRequest(gamma, curve, g, tol, retry=False))
        rows.append(RefineLevel(list(res.grid), res.residuals.normalized_isotropy, res.area, res.mu_ratio))
    r = np.array([x.normalized_isotropy for x in rows])
    ns = np.array([x.grid[0] for x in rows], dtype=float)
    slope = None
    if np.all(r > 0) and not np.all(r <= RESIDUAL_FLOOR):
        slope = float(-np.polyfit(np.log(ns), np.log(r), 1)[0])
    a1, a2 = rows[-2].area, rows[-1].area
    change = abs(a2 - a1) / abs(a2) if a2 != 0 else abs(a2 - a1)
    return RefineTable(rows, slope, float(change))
