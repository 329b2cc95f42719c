import numpy as np
import pytest
from hypothesis import strategies as st

from lagfill.curves import Curve
from lagfill.geometry import complex_to_real_matrix

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
vec4 = st.lists(finite, min_size=4, max_size=4).map(np.array)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random U(2) as a real 4x4 matrix."""
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return complex_to_real_matrix(q)


def random_polyline(rng: np.random.Generator, n: int = 32, closed: bool = False, scale: float = 1.0) -> Curve:
    pts = scale * rng.standard_normal((n + 1, 4))
    if closed:
        pts[-1] = pts[0]
    return Curve(pts, np.linspace(0.0, 1.0, n + 1), closed)


def circle(n: int = 1024, radius: float = 1.0, center=(0.0, 0.0), line: int = 1, sign: float = 1.0) -> Curve:
    th = sign * 2 * np.pi * np.arange(n + 1) / n
    pts = np.zeros((n + 1, 4))
    k = 0 if line == 1 else 2
    pts[:, k] = center[0] + radius * np.cos(th)
    pts[:, k + 1] = center[1] + radius * np.sin(th)
    pts[-1] = pts[0]
    return Curve(pts, np.linspace(0.0, 1.0, n + 1), True)


def semicircle(n: int = 1024) -> Curve:
    """Upper unit semicircle in the z1-line from (1, 0) to (-1, 0)."""
    th = np.pi * np.arange(n + 1) / n
    pts = np.zeros((n + 1, 4))
    pts[:, 0], pts[:, 1] = np.cos(th), np.sin(th)
    pts[-1, :2] = [-1.0, 0.0]
    return Curve(pts, np.linspace(0.0, 1.0, n + 1))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> bool:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
