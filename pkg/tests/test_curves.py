import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from shapely.geometry import Polygon

from conftest import circle, random_polyline, random_unitary, seeds, semicircle
from lagfill.curves import (
    Curve,
    PlanarCurve,
    action_integral,
    as_planar,
    augment_with_origin_segments,
    close_with_chord,
    component_split,
    concat,
    double_across_complex,
    length,
    partial_area,
    refine_midpoints,
    resample,
    resample_with_index,
    reverse,
    segment,
    transform,
    translate,
)
from lagfill.errors import AlreadyClosed, EndpointMismatch, EndpointsNotOnGamma, NotPlanar
from lagfill.geometry import Boundary, LinearMap4, symplectic_form, z1_plane, z2_plane

SQUARE = np.array([[0, 0, 0, 0], [1, 0, 0, 0], [1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0]], dtype=float)


def shapely_area(xy: np.ndarray) -> float:
    """Signed area of a closed planar polygon via shapely (ccw positive)."""
    poly = Polygon(xy[:-1])
    sign = 1.0 if poly.exterior.is_ccw else -1.0
    return sign * poly.area


class TestValidation:
    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            Curve(np.zeros((3, 4)), [0.0, 0.5, 0.9])
        with pytest.raises(ValueError):
            Curve(np.zeros((3, 4)), [0.0, 0.5, 0.5])

    def test_closed_needs_equal_ends(self):
        with pytest.raises(ValueError):
            Curve(np.eye(4)[:2], [0.0, 1.0], closed=True)

    def test_non_finite(self):
        pts = np.zeros((2, 4))
        pts[1, 0] = np.nan
        with pytest.raises(ValueError):
            Curve(pts, [0.0, 1.0])

    def test_planar(self):
        with pytest.raises(NotPlanar):
            PlanarCurve(np.eye(4)[[0, 2]], [0.0, 1.0], line=1)
        assert as_planar(Curve.from_points(SQUARE)).line == 1


class TestLengthAction:
    def test_length_examples(self):
        assert length(segment([0, 0, 0, 0], [3, 4, 0, 0])) == 5.0
        n = 1024
        assert length(circle(n)) == pytest.approx(2 * n * np.sin(np.pi / n), rel=1e-12)
        assert abs(length(circle(n)) - 2 * np.pi) < 1e-4
        assert length(segment([1, 1, 1, 1], [1, 1, 1, 1])) == 0.0

    def test_action_examples(self):
        assert action_integral(segment([0, 0, 0, 0], [3, -1, 2, 5])) == 0.0
        assert action_integral(Curve.from_points(SQUARE)) == 1.0
        n = 1024
        c = circle(n)
        assert action_integral(c) == pytest.approx(0.5 * n * np.sin(2 * np.pi / n), rel=1e-12)
        assert abs(action_integral(c) - np.pi) < 1e-4

    @settings(max_examples=50)
    @given(seeds)
    def test_action_matches_shapely_on_planar_polygons(self, seed):
        rng = np.random.default_rng(seed)
        # star-shaped polygon so shapely sees a simple ring
        n = 40
        th = np.sort(rng.uniform(0, 2 * np.pi, n))
        r = rng.uniform(0.5, 2.0, n)
        xy = np.column_stack([r * np.cos(th), r * np.sin(th)])
        xy = np.vstack([xy, xy[:1]])
        pts = np.zeros((n + 1, 4))
        pts[:, 2:] = xy
        c = Curve.from_points(pts)
        assert action_integral(c) == pytest.approx(shapely_area(xy), rel=1e-12)

    @settings(max_examples=50)
    @given(seeds)
    def test_action_is_sum_of_plane_areas(self, seed):
        rng = np.random.default_rng(seed)
        n = 30
        th = np.sort(rng.uniform(0, 2 * np.pi, n))
        pts = np.zeros((n + 1, 4))
        for k in (0, 2):
            r = rng.uniform(0.5, 2.0, n)
            pts[:-1, k], pts[:-1, k + 1] = r * np.cos(th), r * np.sin(th)
        pts[-1] = pts[0]
        c = Curve.from_points(pts)
        expect = shapely_area(pts[:, :2]) + shapely_area(pts[:, 2:])
        assert action_integral(c) == pytest.approx(expect, rel=1e-12)

    @given(seeds)
    def test_cone_stokes(self, seed):
        c = random_polyline(np.random.default_rng(seed), 25, closed=True)
        p = c.points
        cone = sum(0.5 * symplectic_form(p[i], p[i + 1]) for i in range(len(p) - 1))
        assert action_integral(c) == pytest.approx(cone, rel=1e-12, abs=1e-12)


class TestPartialArea:
    def test_square(self):
        np.testing.assert_array_equal(partial_area(Curve.from_points(SQUARE)), [0, 0, 0.5, 1, 1])

    def test_radial_and_constant(self):
        ray = np.outer([0, 1, 2, 3], [1, 2, 0, 0])
        np.testing.assert_array_equal(partial_area(Curve.from_points(ray)), 0.0)
        np.testing.assert_array_equal(partial_area(Curve.from_points(np.ones((4, 4)) * [1, 1, 0, 0])), 0.0)

    def test_not_planar(self):
        with pytest.raises(NotPlanar):
            partial_area(Curve.from_points(np.eye(4)))

    def test_last_equals_action(self):
        c = circle(100)
        assert partial_area(c)[-1] == action_integral(c)


class TestSurgery:
    def test_concat_mismatch(self):
        with pytest.raises(EndpointMismatch):
            concat(segment([0, 0, 0, 0], [1, 0, 0, 0]), segment([0, 1, 0, 0], [1, 0, 0, 0]))

    @given(seeds)
    def test_concat_additive(self, seed):
        rng = np.random.default_rng(seed)
        a = random_polyline(rng, 10)
        b = random_polyline(rng, 7)
        b = Curve(b.points - b.points[0] + a.end, b.params)
        c = concat(a, b)
        assert length(c) == pytest.approx(length(a) + length(b), rel=1e-12)
        assert action_integral(c) == pytest.approx(action_integral(a) + action_integral(b), rel=1e-12, abs=1e-12)

    def test_reverse_circle(self):
        assert abs(action_integral(reverse(circle())) + np.pi) < 1e-4

    def test_translate_example(self):
        c = segment([0, 0, 0, 0], [0, 1, 0, 0])
        assert action_integral(c) == 0.0
        assert action_integral(translate(c, [1, 0, 0, 0])) == 0.5

    @given(seeds)
    def test_translation_law(self, seed):
        rng = np.random.default_rng(seed)
        c = random_polyline(rng, 12)
        a = rng.standard_normal(4)
        lhs = action_integral(translate(c, a)) - action_integral(c)
        rhs = 0.5 * symplectic_form(a, c.end - c.start)
        assert lhs == pytest.approx(rhs, abs=1e-10)

    @given(seeds)
    def test_unitary_invariance(self, seed):
        rng = np.random.default_rng(seed)
        c = random_polyline(rng, 64, closed=True)
        m = LinearMap4(random_unitary(rng))
        i0 = action_integral(c)
        assert action_integral(transform(c, m)) == pytest.approx(i0, rel=1e-12, abs=1e-12)

    def test_swap_unitary(self, rng):
        swap = np.zeros((4, 4))
        swap[0, 2] = swap[1, 3] = swap[2, 0] = swap[3, 1] = 1.0
        c = random_polyline(rng, 64, closed=True)
        assert action_integral(transform(c, swap)) == pytest.approx(action_integral(c), rel=1e-12)

    @given(seeds, st.integers(1, 300))
    def test_resample_keeps_vertices_length_action(self, seed, n):
        c = random_polyline(np.random.default_rng(seed), 9)
        r, idx = resample_with_index(c, n)
        assert r.n_segments == max(n, 9)
        np.testing.assert_array_equal(r.points[idx], c.points)
        assert length(r) <= length(c) * (1 + 1e-12)
        assert action_integral(r) == pytest.approx(action_integral(c), rel=1e-12, abs=1e-12)

    def test_resample_arclength(self):
        c = Curve.from_points([[0, 0, 0, 0], [3, 0, 0, 0], [3, 1, 0, 0]])
        r = resample(c, 8)
        seg = np.linalg.norm(np.diff(r.points, axis=0), axis=1)
        np.testing.assert_allclose(seg, 0.5)

    def test_refine_midpoints(self, rng):
        c = random_polyline(rng, 10)
        r = refine_midpoints(c)
        assert r.n_segments == 20
        assert action_integral(r) == pytest.approx(action_integral(c), rel=1e-12)

    def test_close_with_chord(self):
        c = semicircle()
        loop = close_with_chord(c)
        assert loop.closed
        assert abs(action_integral(loop) - np.pi / 2) < 1e-4
        assert np.linalg.norm(c.end - c.start) == 2.0 <= length(c)
        assert length(loop) <= 2 * length(c)
        with pytest.raises(AlreadyClosed):
            close_with_chord(loop)
        assert action_integral(close_with_chord(segment([1, 2, 3, 4], [0, 1, 0, 5]))) == 0.0


class TestDoubling:
    def test_example(self):
        c = Curve.from_points([[1, 0, 0, 0], [0.5, 0, 1, 0], [0, 0, 0, 0]])
        d = double_across_complex(c, z1_plane())
        assert len(d) == 5 and d.closed
        assert abs(action_integral(d)) <= 1e-15

    def test_inside_plane(self, rng):
        pts = rng.standard_normal((10, 4))
        pts[:, 2:] = 0.0
        d = double_across_complex(Curve.from_points(pts), z1_plane())
        np.testing.assert_array_equal(d.points[9:], pts[::-1])
        assert action_integral(d) == pytest.approx(0.0, abs=1e-14)

    def test_off_plane(self):
        c = Curve.from_points([[1, 0, 0, 0], [0, 0, 0, 0.1]])
        with pytest.raises(EndpointsNotOnGamma):
            double_across_complex(c, z1_plane())

    @settings(max_examples=100)
    @given(seeds)
    def test_zero_action(self, seed):
        rng = np.random.default_rng(seed)
        m = LinearMap4(random_unitary(rng))
        plane = m.map_plane(z1_plane())
        c = random_polyline(rng, 20)
        pts = c.points.copy()
        pts[0], pts[-1] = plane.project(pts[0]), plane.project(pts[-1])
        c = Curve(pts, c.params)
        scale = float(np.abs(pts).max())
        assert abs(action_integral(double_across_complex(c, plane))) <= 1e-12 * scale**2


class TestSplit:
    def test_helix(self):
        t = np.linspace(0, 2 * np.pi, 65)
        c = Curve.from_points(np.column_stack([np.cos(t), np.sin(t), t / (2 * np.pi), 0 * t]))
        a1, a2 = component_split(c)
        np.testing.assert_array_equal(a1.points + a2.points, c.points)
        assert a1.line == 1 and a2.line == 2
        np.testing.assert_array_equal(a2.points[:, 3], 0.0)
        assert a1.closed is False or np.array_equal(a1.start, a1.end)

    def test_planar_input(self):
        c = Curve.from_points(SQUARE)
        a1, a2 = component_split(c)
        np.testing.assert_array_equal(a1.points, c.points)
        np.testing.assert_array_equal(a2.points, 0.0)

    def test_second_component_closed(self, rng):
        pts = rng.standard_normal((8, 4))
        pts[0, 2:] = pts[-1, 2:] = 0.0
        _, a2 = component_split(Curve.from_points(pts))
        assert a2.closed


class TestWedge:
    def test_example(self):
        g = Boundary.pair(z1_plane(), z2_plane())
        c = segment([1, 0, 0, 0], [0, 0, 1, 0])
        loop, rep = augment_with_origin_segments(c, g)
        np.testing.assert_array_equal(loop.points, [[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]])
        assert action_integral(loop) == 0.0
        assert rep.theta_min == pytest.approx(np.pi / 2)
        assert rep.curve_length == pytest.approx(np.sqrt(2))
        assert rep.endpoint_norms == (1.0, 1.0)
        assert rep.bound_ok and rep.csc_bound == pytest.approx(np.sqrt(2))

    def test_wrong_plane(self):
        g = Boundary.pair(z1_plane(), z2_plane())
        with pytest.raises(EndpointsNotOnGamma):
            augment_with_origin_segments(segment([0, 0, 1, 0], [1, 0, 0, 0]), g)
