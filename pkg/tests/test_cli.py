import json

import numpy as np
import pytest

from elastic_shapes.cli import bench
from elastic_shapes.cli.euclidean import flat_align, flat_sweep
from elastic_shapes.cli.generate import random_curve, synthetic_track
from elastic_shapes.cli.io import (
    ConstraintViolation,
    EuclideanCurve,
    ParseError,
    emit,
    h2_to_pdsm,
    ingest,
    latlon_to_unit,
    parse_space,
    pdsm_to_h2,
)
from elastic_shapes.cli.main import main
from elastic_shapes.homog import PDSM, Sphere


def write(path, text):
    path.write_text(text)
    return str(path)


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


# -- ingestion


def test_latlon_examples():
    assert latlon_to_unit(90.0, 123.0) == pytest.approx(np.array([0.0, 0.0, 1.0]), abs=1e-15)
    assert latlon_to_unit(0.0, 0.0) == pytest.approx(np.array([1.0, 0.0, 0.0]))
    assert latlon_to_unit(0.0, 90.0) == pytest.approx(np.array([0.0, 1.0, 0.0]), abs=1e-15)


def test_spd_determinant_normalization(tmp_path):
    m = np.diag([2.0, 2.0, 2.0])
    rot = np.linalg.qr(np.random.default_rng(0).normal(size=(3, 3)))[0]
    m2 = rot @ np.diag([1.0, 2.0, 4.0]) @ rot.T
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"matrices": [m.tolist(), m2.tolist()]}))
    beta = ingest(str(path), PDSM(3))
    assert beta.points[0] == pytest.approx(np.eye(3), abs=1e-15)
    assert beta.points[1] == pytest.approx(m2 / 2.0, abs=1e-14)
    assert np.linalg.det(beta.points[1]) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "space, fmt",
    [("s2", "csv_latlon"), ("s2", "csv_xy"), ("sn:3", "csv_xy"), ("h2", "csv_xy"), ("h2", "json_spd"), ("pdsm:3", "json_spd"), ("r:2", "csv_xy")],
)
def test_emit_ingest_roundtrip(tmp_path, space, fmt):
    rng = np.random.default_rng(1)
    sp = parse_space(space)
    if sp.kind == "euclidean":
        curve = EuclideanCurve(sp, rng.normal(size=(12, 2)))
    else:
        curve = random_curve(sp, 11, rng)
    p1, p2 = str(tmp_path / "a"), str(tmp_path / "b")
    emit(curve, p1, fmt)
    first = ingest(p1, sp, fmt)
    # generated samples may sit a rounding error off the manifold; once read
    # back they are normalized and the file round-trip is exact
    assert np.max(np.abs(first.points - curve.points)) < 1e-10
    emit(first, p2, fmt)
    assert np.max(np.abs(ingest(p2, sp, fmt).points - first.points)) < 1e-12


def test_parse_errors_name_the_row(tmp_path):
    with pytest.raises(ParseError, match=":3"):
        ingest(write(tmp_path / "a.csv", "lat,lon\n1,2\n3,x\n"), Sphere(2), "csv_latlon")
    with pytest.raises(ParseError):
        ingest(write(tmp_path / "b.csv", "lat,lon\n1,2\n"), Sphere(2), "csv_latlon")
    with pytest.raises(ParseError):
        ingest(write(tmp_path / "c.json", "{not json"), PDSM(3))
    with pytest.raises(ValueError):
        parse_space("torus")


def test_constraint_violations(tmp_path):
    with pytest.raises(ConstraintViolation, match=":3"):
        ingest(write(tmp_path / "a.csv", "lat,lon\n1,2\n91,0\n"), Sphere(2), "csv_latlon")
    with pytest.raises(ConstraintViolation, match="matrix 1"):
        bad = {"matrices": [np.eye(3).tolist(), np.diag([1.0, -1.0, 1.0]).tolist()]}
        ingest(write(tmp_path / "b.json", json.dumps(bad)), PDSM(3))
    with pytest.raises(ConstraintViolation):
        ingest(write(tmp_path / "c.csv", "x,y\n0,1\n0,-1\n"), PDSM(2), "csv_xy")
    with pytest.raises(ConstraintViolation):
        ingest(write(tmp_path / "d.csv", "x0,x1,x2\n1,0,0\n1,1,0\n"), Sphere(2), "csv_xy")


def test_half_plane_coordinates_roundtrip():
    rng = np.random.default_rng(2)
    x, y = rng.normal(size=20), rng.uniform(0.1, 3.0, size=20)
    p = h2_to_pdsm(x, y)
    assert np.allclose(np.linalg.det(p), 1.0)
    x2, y2 = pdsm_to_h2(p)
    assert np.allclose(x2, x, atol=1e-13) and np.allclose(y2, y, atol=1e-13)


def test_synthetic_track_is_on_the_sphere():
    track = synthetic_track(np.random.default_rng(3), 100)
    assert track.points.shape == (100, 3)
    assert np.allclose(np.linalg.norm(track.points, axis=1), 1.0)


# -- verbs


def gen(tmp_path, capsys, space, kind, seed=0, points=40):
    a, b = str(tmp_path / f"{kind}1"), str(tmp_path / f"{kind}2")
    ext = ".json" if space.startswith("pdsm") else ".csv"
    a, b = a + ext, b + ext
    code, _ = run(["gen", "--space", space, "--kind", kind, "--points", str(points), "--seed", str(seed), "--out", a, "--out2", b], capsys)
    assert code == 0
    return a, b


@pytest.mark.parametrize("space", ["s2", "pdsm:3", "h2"])
def test_dist_of_a_file_with_itself_is_zero(tmp_path, capsys, space):
    a, _ = gen(tmp_path, capsys, space, "random")
    code, out = run(["dist", a, a, "--space", space], capsys)
    assert code == 0
    assert json.loads(out.out)["distance"] < 1e-6


@pytest.mark.parametrize("space", ["s2", "pdsm:3"])
def test_planted_pair_distance(tmp_path, capsys, space):
    a, b = gen(tmp_path, capsys, space, "plant", seed=5)
    code, out = run(["dist", a, b, "--space", space], capsys)
    doc = json.loads(out.out)
    assert code == 0
    assert doc["distance"] < 1e-4
    assert np.array(doc["y_opt"]).shape == (3, 3)


def test_triangle_inequality_across_three_files(tmp_path, capsys):
    a, b = gen(tmp_path, capsys, "s2", "random", seed=1)
    c, _ = gen(tmp_path / ".." / tmp_path.name, capsys, "s2", "track", seed=2)
    d = {}
    for x, y in [(a, b), (b, c), (a, c)]:
        _, out = run(["dist", x, y, "--quotient", "param"], capsys)
        d[x, y] = json.loads(out.out)["distance"]
    assert d[a, c] <= d[a, b] + d[b, c] + 1e-9


def test_dist_is_deterministic(tmp_path, capsys):
    a, b = gen(tmp_path, capsys, "s2", "random", seed=4)
    _, first = run(["dist", a, b], capsys)
    _, second = run(["dist", a, b], capsys)
    assert first.out == second.out


def test_exit_codes(tmp_path, capsys):
    missing = str(tmp_path / "nope.csv")
    code, out = run(["dist", missing, missing], capsys)
    assert code == 1 and "error" in out.err
    bad = write(tmp_path / "bad.csv", "lat,lon\n95,0\n0,0\n")
    assert run(["dist", bad, bad], capsys)[0] == 1
    with pytest.raises(SystemExit):
        main(["dist", bad, bad, "--dp-res", "1"])


def test_lift_verb(tmp_path, capsys):
    a, _ = gen(tmp_path, capsys, "s2", "random")
    code, out = run(["lift", a], capsys)
    doc = json.loads(out.out)
    assert code == 0
    assert np.array(doc["lift"]).shape == (40, 3, 3)


@pytest.mark.parametrize("space", ["s2", "pdsm:3", "h2"])
def test_geodesic_frames_roundtrip_through_ingest(tmp_path, capsys, space):
    a, b = gen(tmp_path, capsys, space, "random", seed=6, points=20)
    out = tmp_path / "sweep"
    code, _ = run(["geodesic", a, b, "--space", space, "--frames", "3", "--out", str(out), "--svg"], capsys)
    assert code == 0
    doc = json.loads((out / "geodesic.json").read_text())
    assert len(doc["frames"]) == 4
    sp = parse_space(space)
    for name, pts in zip(doc["frames"], doc["points"]):
        frame = ingest(str(out / name), sp)
        assert np.max(np.abs(frame.points - np.array(pts))) < 1e-12
    assert np.max(np.abs(ingest(str(out / doc["frames"][0]), sp).points - ingest(a, sp).points)) < 1e-12
    assert (out / "geodesic.svg").read_text().startswith("<svg")


def test_geodesic_of_identical_inputs_is_constant(tmp_path, capsys):
    a, _ = gen(tmp_path, capsys, "s2", "random", points=15)
    out = tmp_path / "sweep"
    run(["geodesic", a, a, "--frames", "2", "--out", str(out)], capsys)
    doc = json.loads((out / "geodesic.json").read_text())
    first = np.array(doc["points"][0])
    for pts in doc["points"]:
        assert np.max(np.abs(np.array(pts) - first)) < 1e-8


# -- flat baseline


def line(a, b, n):
    t = np.linspace(0.0, 1.0, n + 1)[:, None]
    return (1 - t) * np.asarray(a, float) + t * np.asarray(b, float)


def test_straight_lines_have_the_closed_form_distance():
    # constant transforms sqrt(L) u: the squared distance is
    # L1 + L2 - 2 sqrt(L1 L2) cos(theta), and for cos(theta) > 0 no warp helps
    rng = np.random.default_rng(7)
    for _ in range(5):
        a1, a2 = rng.normal(size=(2, 2))
        u1, u2 = rng.normal(size=(2, 2))
        if u1 @ u2 <= 0:
            u2 = -u2
        b1, b2 = line(a1, a1 + u1, 10), line(a2, a2 + u2, 10)
        l1, l2 = np.linalg.norm(u1), np.linalg.norm(u2)
        cos = u1 @ u2 / (l1 * l2)
        expected = np.sqrt(l1 + l2 - 2 * np.sqrt(l1 * l2) * cos)
        res = flat_align(b1, b2, translation_invariant=True)
        assert res.distance == pytest.approx(expected, abs=1e-12)
        with_start = flat_align(b1, b2, reparametrize=False)
        assert with_start.distance == pytest.approx(np.hypot(expected, np.linalg.norm(a1 - a2)), abs=1e-12)


def test_flat_distance_properties():
    rng = np.random.default_rng(8)
    b1, b2 = rng.normal(size=(2, 15, 2))
    assert flat_align(b1, b1).distance < 1e-12
    shift = np.array([3.0, -1.0])
    d = flat_align(b1, b2, translation_invariant=True).distance
    assert flat_align(b1 + shift, b2, translation_invariant=True).distance == pytest.approx(d, abs=1e-12)
    frames, _ = flat_sweep(b1, b2, frames=4)
    assert len(frames) == 5 and np.array_equal(frames[0], b1)


def test_baseline_verb_contrasts_geometries(tmp_path, capsys):
    rows1 = "\n".join(f"{x},{float(1 + 0.5 * np.sin(3 * x))!r}" for x in np.linspace(-1, 1, 25))
    rows2 = "\n".join(f"{x},{float(2 + 0.3 * np.cos(2 * x))!r}" for x in np.linspace(-1, 1, 25))
    a = write(tmp_path / "a.csv", "x,y\n" + rows1 + "\n")
    b = write(tmp_path / "b.csv", "x,y\n" + rows2 + "\n")
    code, out = run(["baseline", a, b], capsys)
    doc = json.loads(out.out)
    assert code == 0
    assert doc["midpoint_max_difference"] > 1e-6
    assert doc["flat_distance"] > 0 and doc["hyperbolic_distance"] > 0


# -- bench


def test_bench_layout_and_determinism(tmp_path, capsys):
    assert len(bench.CONFIGS) * len(bench.SIZES) == 18
    b1, b2 = bench.make_problem("S2-eval", 20, 3, 0)
    c1, c2 = bench.make_problem("S2-eval", 20, 3, 0)
    assert np.array_equal(b1.points, c1.points) and np.array_equal(b2.points, c2.points)
    path = tmp_path / "b.csv"
    code, _ = run(["bench", "--configs", "R2,S2-eval", "--sizes", "10,20", "--problems", "2", "--out", str(path)], capsys)
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "config,points,problems,mean_seconds"
    assert len(lines) == 5
    assert all(float(row.split(",")[3]) > 0 for row in lines[1:])
    with pytest.raises(ValueError):
        bench.run_bench(["nope"], (10,), 1)
