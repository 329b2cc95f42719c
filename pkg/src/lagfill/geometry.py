"""Linear symplectic algebra of C^2 = R^4.

Points and tangent vectors are float arrays with a trailing axis of length 4
in the order ``(x1, y1, x2, y2)``, so ``z^k = x^k + i y^k``.  All functions
broadcast over leading axes.

Conventions
-----------
omega(u, v)  = (u.x1 v.y1 - u.y1 v.x1) + (u.x2 v.y2 - u.y2 v.x2)
eta_z(v)     = 1/2 omega(z, v)
J(x, y)      = (-y, x) in each complex coordinate (multiplication by i)

With the Hermitian product <a, b> = sum conj(a_k) b_k one has
omega(u, v) = Im <u, v> and the Euclidean product is Re <u, v>, so every
complex-unitary map preserves both.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFrame, KindViolation, NonTransversalPlanes, WrongPlaneKind

FRAME_TOL = 1e-12
KIND_TOL = 1e-9
ANGLE_TOL = 1e-9

J_MATRIX = np.array(
    [[0.0, -1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, -1.0], [0.0, 0.0, 1.0, 0.0]]
)
# omega(u, v) = u @ OMEGA_MATRIX @ v
OMEGA_MATRIX = np.array(
    [[0.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, -1.0, 0.0]]
)

E1 = np.array([1.0, 0.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0, 0.0])
E4 = np.array([0.0, 0.0, 0.0, 1.0])


def as_vec4(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape[-1:] != (4,):
        raise ValueError(f"expected trailing dimension 4, got shape {a.shape}")
    return a


def symplectic_form(u, v):
    """Standard symplectic form dx1^dy1 + dx2^dy2 evaluated on (u, v)."""
    u = as_vec4(u)
    v = as_vec4(v)
    return (u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]) + (
        u[..., 2] * v[..., 3] - u[..., 3] * v[..., 2]
    )


def liouville(z, v):
    """Liouville primitive of the symplectic form at base point ``z`` applied to ``v``.

    Uses the identity eta_z(v) = 1/2 omega(z, v), so the result equals
    ``0.5 * symplectic_form(z, v)`` bit for bit.
    """
    return 0.5 * symplectic_form(z, v)


def complex_structure(v) -> np.ndarray:
    v = as_vec4(v)
    out = np.empty_like(v)
    out[..., 0] = -v[..., 1]
    out[..., 1] = v[..., 0]
    out[..., 2] = -v[..., 3]
    out[..., 3] = v[..., 2]
    return out


def to_complex(v) -> np.ndarray:
    """(x1, y1, x2, y2) -> complex array (..., 2)."""
    v = as_vec4(v)
    return v[..., 0::2] + 1j * v[..., 1::2]


def from_complex(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (4,))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def complex_to_real_matrix(w) -> np.ndarray:
    """Real 4x4 matrix of the complex-linear map ``w`` (2x2) in our coordinate layout."""
    w = np.asarray(w, dtype=complex)
    m = np.zeros((4, 4))
    for r in range(2):
        for c in range(2):
            p, q = w[r, c].real, w[r, c].imag
            m[2 * r : 2 * r + 2, 2 * c : 2 * c + 2] = [[p, -q], [q, p]]
    return m


class PlaneKind(str, enum.Enum):
    COMPLEX = "complex"
    LAGRANGIAN = "lagrangian"


@dataclass(frozen=True, eq=False)
class Plane:
    """Real 2-plane through the origin stored by an orthonormal frame ``(u, v)``.

    Build instances with :func:`validate_plane`; the constructor only
    checks the invariants at ``FRAME_TOL``.
    """

    kind: PlaneKind
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = as_vec4(self.u).copy()
        v = as_vec4(self.v).copy()
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "kind", PlaneKind(self.kind))
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise DegenerateFrame("non-finite frame")
        if abs(u @ u - 1) > FRAME_TOL or abs(v @ v - 1) > FRAME_TOL or abs(u @ v) > FRAME_TOL:
            raise DegenerateFrame("frame is not orthonormal")
        if self.kind is PlaneKind.COMPLEX:
            ju = complex_structure(u)
            off = ju - (ju @ u) * u - (ju @ v) * v
            if np.linalg.norm(off) > FRAME_TOL:
                raise KindViolation("span is not J-invariant")
        elif abs(symplectic_form(u, v)) > FRAME_TOL:
            raise KindViolation("omega does not vanish on the plane")

    @property
    def basis(self) -> np.ndarray:
        """4x2 matrix with the frame as columns."""
        return np.column_stack([self.u, self.v])

    def projector(self) -> np.ndarray:
        return np.outer(self.u, self.u) + np.outer(self.v, self.v)

    def project(self, z) -> np.ndarray:
        z = as_vec4(z)
        return (z @ self.u)[..., None] * self.u + (z @ self.v)[..., None] * self.v

    def distance(self, z):
        z = as_vec4(z)
        return np.linalg.norm(z - self.project(z), axis=-1)

    def to_json(self) -> list:
        return [self.u.tolist(), self.v.tolist()]


def validate_plane(u, v, kind) -> Plane:
    """Orthonormalize ``(u, v)``, check the kind condition, return a Plane.

    The kind check runs at ``KIND_TOL`` after Gram-Schmidt; the frame is then
    snapped so the stored invariants hold to ``FRAME_TOL``.

    Raises
    ------
    DegenerateFrame
        If the vectors do not span a 2-plane.
    KindViolation
        If the span is not J-invariant (complex) or omega does not vanish on
        it (Lagrangian).
    """
    kind = PlaneKind(kind)
    u = as_vec4(u)
    v = as_vec4(v)
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise DegenerateFrame("non-finite frame vector")
    nu = np.linalg.norm(u)
    scale = max(nu, np.linalg.norm(v))
    if nu <= 1e-12 * max(scale, 1e-300) or scale == 0:
        raise DegenerateFrame("zero frame vector")
    u = u / nu
    v = v - (u @ v) * u
    nv = np.linalg.norm(v)
    if nv <= 1e-12 * scale:
        raise DegenerateFrame("frame vectors are parallel")
    v = v / nv
    ju = complex_structure(u)
    if kind is PlaneKind.COMPLEX:
        c = ju @ v
        off = np.linalg.norm(ju - c * v)
        if off > KIND_TOL:
            raise KindViolation(f"span is not J-invariant (defect {off:.3e})", defect=float(off))
        v = ju if c > 0 else -ju
    else:
        w = symplectic_form(u, v)
        if abs(w) > KIND_TOL:
            raise KindViolation(f"omega(u, v) = {w:.3e} on a Lagrangian frame", defect=float(w))
        v = v - w * ju
        v = v / np.linalg.norm(v)
    return Plane(kind, u, v)


def principal_angle(p1: Plane, p2: Plane) -> float:
    """Smallest principal angle between two planes, in [0, pi/2].

    Cosines come from the singular values of the 2x2 frame Gram matrix, sines
    from the part of ``p2`` orthogonal to ``p1``; combining them with
    ``arctan2`` keeps both ends of the range accurate.
    """
    q1, q2 = p1.basis, p2.basis
    cos_max = np.linalg.svd(q1.T @ q2, compute_uv=False).max()
    resid = q2 - q1 @ (q1.T @ q2)
    sin_min = np.linalg.svd(resid, compute_uv=False).min()
    return float(np.arctan2(sin_min, cos_max))


def reflect_complex(z, plane: Plane) -> np.ndarray:
    """Orthogonal reflection across a complex plane (a Kähler involution)."""
    if plane.kind is not PlaneKind.COMPLEX:
        raise WrongPlaneKind("reflect_complex needs a complex plane")
    z = as_vec4(z)
    return 2.0 * plane.project(z) - z


def reflect_lagrangian(z, plane: Plane) -> np.ndarray:
    """Orthogonal reflection across a Lagrangian plane; reverses omega and eta."""
    if plane.kind is not PlaneKind.LAGRANGIAN:
        raise WrongPlaneKind("reflect_lagrangian needs a Lagrangian plane")
    z = as_vec4(z)
    return 2.0 * plane.project(z) - z


@dataclass(frozen=True, eq=False)
class LinearMap4:
    matrix: np.ndarray
    is_symplectic: bool = field(init=False)
    is_unitary: bool = field(init=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise ValueError("LinearMap4 needs a 4x4 matrix")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        symp = np.allclose(m.T @ OMEGA_MATRIX @ m, OMEGA_MATRIX, rtol=0, atol=FRAME_TOL)
        unit = np.allclose(m.T @ m, np.eye(4), rtol=0, atol=FRAME_TOL) and np.allclose(
            m @ J_MATRIX, J_MATRIX @ m, rtol=0, atol=FRAME_TOL
        )
        object.__setattr__(self, "is_symplectic", bool(symp))
        object.__setattr__(self, "is_unitary", bool(unit))

    @classmethod
    def identity(cls) -> "LinearMap4":
        return cls(np.eye(4))

    def apply(self, z) -> np.ndarray:
        return as_vec4(z) @ self.matrix.T

    def inverse(self) -> "LinearMap4":
        if self.is_unitary:
            return LinearMap4(self.matrix.T)
        return LinearMap4(np.linalg.inv(self.matrix))

    def map_plane(self, plane: Plane) -> Plane:
        return validate_plane(self.apply(plane.u), self.apply(plane.v), plane.kind)


@dataclass(frozen=True, eq=False)
class Boundary:
    """One plane, or an ordered transversal pair of planes through the origin."""

    planes: tuple
    theta_min: float | None = None

    def __post_init__(self):
        planes = tuple(self.planes)
        object.__setattr__(self, "planes", planes)
        if len(planes) not in (1, 2):
            raise ValueError("a boundary has one or two planes")
        if len(planes) == 2:
            theta = principal_angle(*planes)
            object.__setattr__(self, "theta_min", float(theta))
            if theta <= ANGLE_TOL:
                raise NonTransversalPlanes(
                    f"planes are not transversal (theta_min = {theta:.3e})", theta_min=float(theta)
                )

    @classmethod
    def one(cls, plane: Plane) -> "Boundary":
        return cls((plane,))

    @classmethod
    def pair(cls, p1: Plane, p2: Plane) -> "Boundary":
        return cls((p1, p2))

    @property
    def is_pair(self) -> bool:
        return len(self.planes) == 2

    @property
    def has_complex(self) -> bool:
        return any(p.kind is PlaneKind.COMPLEX for p in self.planes)

    @property
    def primary_index(self) -> int:
        """Index of the plane put in normal form: the first complex one, else 0."""
        for i, p in enumerate(self.planes):
            if p.kind is PlaneKind.COMPLEX:
                return i
        return 0

    def distance(self, z):
        """Distance from each point to the nearest plane."""
        return np.min([p.distance(z) for p in self.planes], axis=0)


def z1_plane() -> Plane:
    return Plane(PlaneKind.COMPLEX, E1, E2)


def z2_plane() -> Plane:
    return Plane(PlaneKind.COMPLEX, E3, E4)


def real_plane() -> Plane:
    """The standard Lagrangian plane {y1 = y2 = 0}."""
    return Plane(PlaneKind.LAGRANGIAN, E1, E3)


def _standardizing_unitary(plane: Plane) -> np.ndarray:
    a = to_complex(plane.u)
    if plane.kind is PlaneKind.COMPLEX:
        row2 = np.array([-a[1], a[0]])
        k = int(np.argmax(np.abs(row2)))
        row2 = row2 * (np.conj(row2[k]) / abs(row2[k]))
        w = np.array([np.conj(a), row2])
    else:
        b = to_complex(plane.v)
        w = np.conj(np.column_stack([a, b])).T
    return complex_to_real_matrix(w)


def normalize_gamma(gamma: Boundary) -> tuple[LinearMap4, Boundary]:
    """Unitary change of coordinates putting the primary plane in normal form.

    A complex plane goes to the z1-plane, a Lagrangian plane to
    {y1 = y2 = 0}.  For pairs only the primary plane (see
    :attr:`Boundary.primary_index`) is standardized; the partner's frame is
    carried along.  The action integral is unchanged since unitary maps
    preserve eta.
    """
    i = gamma.primary_index
    primary = gamma.planes[i]
    u = LinearMap4(_standardizing_unitary(primary))
    std = z1_plane() if primary.kind is PlaneKind.COMPLEX else real_plane()
    planes = list(gamma.planes)
    planes[i] = std
    if gamma.is_pair:
        j = 1 - i
        planes[j] = u.map_plane(gamma.planes[j])
        return u, Boundary(tuple(planes))
    return u, Boundary((std,))
