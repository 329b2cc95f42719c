import csv
import json

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import random_polyline, seeds
from lagfill import io
from lagfill.curves import Curve
from lagfill.filler import fill_complex_half_disk
from lagfill.geometry import Boundary, PlaneKind, real_plane, z1_plane, z2_plane
from lagfill.harness import case_gamma, estimate_mu


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_curve_csv_round_trip_is_bit_exact(tmp_path_factory, seed):
    c = random_polyline(np.random.default_rng(seed), 17, False, 1e3)
    path = tmp_path_factory.mktemp("c") / "c.csv"
    io.write_curve(c, path)
    back = io.read_curve(path)
    np.testing.assert_array_equal(back.points, c.points)
    np.testing.assert_array_equal(back.params, c.params)


@pytest.mark.parametrize("closed", [False, True])
def test_curve_json_round_trip(tmp_path, rng, closed):
    c = random_polyline(rng, 12, closed, 1.0)
    path = tmp_path / "c.json"
    io.write_curve(c, path)
    back = io.read_curve(path)
    np.testing.assert_array_equal(back.points, c.points)
    assert back.closed == c.closed


def test_csv_header_checked(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,a,b,c,d\n0,0,0,0,0\n1,1,0,0,0\n")
    with pytest.raises(ValueError):
        io.read_curve(path)


def test_csv_layout(tmp_path):
    s = np.array([0.0, 0.5, 1.0])
    c = Curve(np.array([[0, 0, 0, 0], [0.1, 0, 0, 0], [1 / 3, 0, 0, 0]], dtype=float), s)
    path = tmp_path / "c.csv"
    io.write_curve_csv(c, path)
    rows = list(csv.reader(path.open()))
    assert rows[0] == list(io.CURVE_COLUMNS)
    assert rows[3][1] == repr(1 / 3)


@pytest.mark.parametrize(
    "gamma",
    [
        Boundary.one(z1_plane()),
        Boundary.one(real_plane()),
        Boundary.pair(z1_plane(), z2_plane()),
        case_gamma("wedge_lagrangian"),
    ],
)
def test_gamma_round_trip(tmp_path, gamma):
    path = tmp_path / "g.json"
    io.write_gamma(gamma, path)
    back = io.read_gamma(path)
    assert back.is_pair == gamma.is_pair
    for p, q in zip(back.planes, gamma.planes):
        assert p.kind is q.kind
        np.testing.assert_array_equal(p.u, q.u)
        np.testing.assert_array_equal(p.v, q.v)


def test_pair_kinds_inferred():
    d = {"type": "pair", "frame": [[1, 0, 0, 0], [0, 1, 0, 0]], "frame2": [[1, 0, 1, 0], [0, 1, 0, -1]]}
    g = io.gamma_from_json(d)
    assert [p.kind for p in g.planes] == [PlaneKind.COMPLEX, PlaneKind.LAGRANGIAN]


def test_unknown_gamma_type():
    with pytest.raises(ValueError):
        io.gamma_from_json({"type": "cone", "frame": []})


def test_mesh_round_trip(tmp_path):
    s = np.linspace(0, np.pi, 33)
    c = Curve(np.column_stack([np.cos(s), np.sin(s), 0.2 * np.sin(s), 0 * s]), s / np.pi)
    res = fill_complex_half_disk(z1_plane(), c, (64, 32))
    path = tmp_path / "m.json"
    io.write_mesh(res.mesh, path)
    back = io.read_mesh(path)
    np.testing.assert_array_equal(back.vertices, res.mesh.vertices)
    assert set(back.roles) == set(res.mesh.roles)
    assert back.chart == res.mesh.chart


def test_obj_export(tmp_path):
    s = np.linspace(0, 1, 17)
    c = Curve(np.column_stack([s, np.sin(3 * s), 0 * s, 0 * s]), s)
    res = fill_complex_half_disk(z1_plane(), c, (32, 16))
    path = tmp_path / "m.obj"
    io.write_obj(res.mesh, path)
    lines = path.read_text().splitlines()
    ns1, nt1 = res.mesh.dims
    assert sum(line.startswith("v ") for line in lines) == ns1 * nt1
    faces = [list(map(int, line.split()[1:])) for line in lines if line.startswith("f ")]
    assert len(faces) == 2 * (ns1 - 1) * (nt1 - 1)
    assert min(min(f) for f in faces) == 1 and max(max(f) for f in faces) == ns1 * nt1
    with pytest.raises(ValueError):
        io.write_obj(res.mesh, path, drop="z")


def test_ensemble_csv(tmp_path):
    rep = estimate_mu("complex", 2, seed=1, grid=(64, 32), samples=32)
    path = tmp_path / "e.csv"
    io.write_ensemble_csv(rep, path)
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 2 and tuple(rows[0]) == io.ENSEMBLE_COLUMNS
    assert float(rows[1]["mu_ratio"]) == rep.records[1].mu_ratio


def test_dumps_rejects_nan():
    with pytest.raises(ValueError):
        io.dumps({"x": float("nan")})
    assert json.loads(io.dumps({"x": 1.5})) == {"x": 1.5}
