import csv
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from minkpoly import cli, io, mink3, polygon as pg
from minkpoly.seeding import task_rng


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_polygon(path, P):
    path.write_text(io.dumps(io.polygon_to_dict(P)))
    return path


# --- io ---------------------------------------------------------------------------


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip(x):
    assert float(io.format_float(x)) == x


def test_format_float():
    assert io.format_float(1) == "1.0"
    assert io.format_float(0.1) == "0.10000000000000001"
    assert io.format_float(float("nan")) == "null"


def test_polygon_round_trip(polys):
    for P in polys:
        Q = io.load_polygons(io.dumps(io.polygon_to_dict(P)))[0]
        np.testing.assert_array_equal(Q.edges, P.edges)
        assert (Q.spec.p, Q.spec.q, Q.spec.r) == (P.spec.p, P.spec.q, P.spec.r)


def test_load_shapes(polys):
    recs = [io.polygon_to_dict(P) for P in polys[:3]]
    assert len(io.load_polygons(json.dumps(recs))) == 3
    assert len(io.load_polygons(json.dumps({"header": {}, "polygons": recs}))) == 3
    with pytest.raises(ValueError):
        io.load_polygons(json.dumps({"p": 2}))
    with pytest.raises(ValueError):
        io.load_polygons("3")


def test_dumps_layout():
    text = io.dumps({"a": [1.0, 2.5], "b": {"c": [[1, 2], [3, 4]]}, "e": []})
    assert json.loads(text) == {"a": [1.0, 2.5], "b": {"c": [[1, 2], [3, 4]]}, "e": []}
    assert "[1.0, 2.5]" in text


def test_task_rng_independent_of_order():
    a = task_rng(7, 3).normal(size=4)
    task_rng(7, 0).normal(size=100)
    np.testing.assert_array_equal(task_rng(7, 3).normal(size=4), a)
    assert not np.array_equal(task_rng(7, 4).normal(size=4), a)


# --- sample -------------------------------------------------------------------


def test_sample(tmp_path, capsys):
    out = tmp_path / "s.json"
    code, _, _ = run(capsys, "sample", "--p", 2, "--q", 2, "--r", .5, .5, .5, .5,
                     "--dmax", 3, "--count", 10, "--seed", 7, "--out", out)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["header"]["seed"] == 7 and doc["header"]["count"] == 10
    polys = io.load_polygons(out.read_text())
    assert len(polys) == 10
    for P in polys:
        assert np.abs(pg.closure_residual(P.edges)).max() < 1e-9


def test_sample_deterministic_and_thread_independent(tmp_path, capsys, monkeypatch):
    args = ["sample", "--p", 3, "--q", 2, "--r", 1, 1, 1, 1, 1, "--dmax", 4, "--count", 6,
            "--seed", 11, "--degauge"]
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    run(capsys, *args, "--out", a)
    run(capsys, *args, "--out", b)
    monkeypatch.setenv("MINKPOLY_THREADS", "3")
    run(capsys, *args, "--out", c)
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_sample_normalize(capsys):
    code, out, _ = run(capsys, "sample", "--p", 3, "--q", 1, "--r", 1, 1, 1, 5, "--normalize")
    assert code == 0
    assert sum(json.loads(out)["header"]["r"]) == pytest.approx(2.0)


def test_sample_exit_codes(capsys):
    assert run(capsys, "sample", "--p", 3, "--q", 1, "--r", .5, .5, .5, .5)[0] == 2
    assert run(capsys, "sample", "--p", 2, "--q", 2, "--r", .5, .5, .5, .5)[0] == 3
    assert run(capsys, "sample", "--p", 1, "--q", 2, "--r", 1, 1, 1)[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["sample", "--p", "x"])
    assert exc.value.code == 2


# --- flow -----------------------------------------------------------------------


def read_trace(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_flow_witness_period(tmp_path, capsys):
    src = write_polygon(tmp_path / "w.json", pg.witness(1))
    out = tmp_path / "t.csv"
    code, _, _ = run(capsys, "flow", "--in", src, "--diag", 2, "--periods", 1, "--steps", 9, "--out", out)
    assert code == 0
    rows = read_trace(out)
    assert list(rows[0]) == ["step", "time", "phi_2", "d_2", "closure_residual"]
    assert len(rows) == 9
    first, last = rows[0], rows[-1]
    assert float(last["d_2"]) == pytest.approx(float(first["d_2"]), abs=1e-9)
    assert abs(pg.wrap_angle(float(last["phi_2"]) - float(first["phi_2"]))) < 1e-9
    final = io.load_polygons((tmp_path / "t.csv.final.json").read_text())[0]
    np.testing.assert_allclose(final.edges, pg.witness(1).edges, atol=1e-9)


def test_flow_single_row(tmp_path, capsys):
    P = pg.sample_polygon(pg.PolygonSpec(3, 2, (1, 1, 1, 1, 1)), 4, np.random.default_rng(0))
    src = write_polygon(tmp_path / "p.json", P)
    code, out, _ = run(capsys, "flow", "--in", src, "--diag", 3, "--time", 0, "--steps", 1)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    phi = [float(x) for x in lines[1].split(",")[2:4]]
    np.testing.assert_allclose(phi, pg.action_angle(P).phi, atol=1e-12)


def test_flow_numeric_matches_exact(tmp_path, capsys):
    src = write_polygon(tmp_path / "w.json", pg.witness(1))
    traces = {}
    for mode in ("exact", "numeric"):
        out = tmp_path / f"{mode}.csv"
        code, _, _ = run(capsys, "flow", "--in", src, "--diag", 2, "--periods", 1, "--steps", 5,
                         "--mode", mode, "--integrator-steps", 10_000, "--out", out)
        assert code == 0
        traces[mode] = np.array([float(r["phi_2"]) for r in read_trace(out)])
    assert np.abs(pg.wrap_angle(traces["exact"] - traces["numeric"])).max() < 1e-6


def test_flow_degenerate_angle_is_nan(tmp_path, capsys):
    src = write_polygon(tmp_path / "w.json", pg.witness(0))
    code, out, _ = run(capsys, "flow", "--in", src, "--diag", 2, "--time", 1, "--steps", 2)
    assert code == 0
    assert out.strip().splitlines()[1].split(",")[2] == "nan"


def test_flow_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "flow", "--in", bad, "--diag", 2, "--time", 1)[0] == 2
    src = write_polygon(tmp_path / "w.json", pg.witness(1))
    assert run(capsys, "flow", "--in", src, "--diag", 3, "--time", 1)[0] == 2
    assert run(capsys, "flow", "--in", tmp_path / "missing.json", "--diag", 2, "--time", 1)[0] == 2
    rec = io.polygon_to_dict(pg.witness(1))
    rec["edges"][0][2] = 0.6
    bad.write_text(json.dumps(rec))
    code, _, err = run(capsys, "flow", "--in", bad, "--diag", 2, "--time", 1)
    assert code == 2 and "length" in err.lower()


# --- gt ---------------------------------------------------------------------------


def test_gt_witness(tmp_path, capsys):
    src = write_polygon(tmp_path / "w.json", pg.witness(0))
    code, out, _ = run(capsys, "gt", "--in", src)
    assert code == 0
    doc = json.loads(out)
    assert doc["residual_d"] < 1e-9 and doc["residual_trace"] < 1e-9
    assert doc["gamma"][:2] == pytest.approx([0, 0]) and doc["delta"][:2] == pytest.approx([0.5, 1])


def test_gt_sampled(tmp_path, capsys):
    src = tmp_path / "s.json"
    run(capsys, "sample", "--p", 3, "--q", 2, "--r", 1, 2, 1, 1, 1, "--dmax", 6, "--count", 5,
        "--degauge", "--out", src)
    code, out, _ = run(capsys, "gt", "--in", src)
    assert code == 0
    for rec in json.loads(out):
        assert rec["residual_d"] < 1e-9 and rec["residual_trace"] < 1e-9


def test_gt_exit_codes(tmp_path, capsys, monkeypatch):
    bad = tmp_path / "bad.json"
    bad.write_text("[{]")
    assert run(capsys, "gt", "--in", bad)[0] == 2

    from minkpoly import pseudo_gt
    from minkpoly.errors import NonRealSpectrum

    def boom(mp):
        raise NonRealSpectrum(3, -1.0)

    monkeypatch.setattr(pseudo_gt, "gt_variables", boom)
    src = write_polygon(tmp_path / "w.json", pg.witness(1))
    code, _, err = run(capsys, "gt", "--in", src)
    assert code == 4 and "l = 3" in err


# --- polytope ---------------------------------------------------------------------


def test_polytope_cmd(capsys):
    code, out, _ = run(capsys, "polytope", "--p", 2, "--q", 2, "--r", 1, 1, 1, 1, "--lattice", "--dmax", 5)
    assert code == 0 and len(json.loads(out)["lattice_points"]) == 4
    code, out, _ = run(capsys, "polytope", "--p", 3, "--q", 1, "--r", .2, .2, .2, 1.4)
    doc = json.loads(out)
    assert doc["bounded"] is True and doc["bounds"][0] == pytest.approx([0.4, 1.2])
    code, out, _ = run(capsys, "polytope", "--p", 2, "--q", 2, "--r", .5, .5, .5, .5)
    assert json.loads(out)["bounded"] is False
    assert run(capsys, "polytope", "--p", 2, "--q", 2, "--r", 1, 1, 1, 1, "--lattice")[0] == 3
    assert run(capsys, "polytope", "--p", 3, "--q", 1, "--r", .5, .5, .5, .5)[0] == 2


# --- verify -----------------------------------------------------------------------


def test_verify_passes(tmp_path, capsys):
    rep = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--suite", "polytope", "--samples", 50, "--json", rep)
    assert code == 0 and "[FAIL]" not in out
    doc = json.loads(rep.read_text())
    assert doc["passed"] and all("margin" in r for r in doc["results"])


def test_verify_tolerance_override(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "algebra", "--samples", 200, "--tol", "jacobi=-1")
    assert code == 1 and "--seed 1" in out
    assert run(capsys, "verify", "--suite", "algebra", "--tol", "oops")[0] == 2


def test_verify_catches_wrong_cross_sign(capsys, monkeypatch):
    right = mink3.cross
    monkeypatch.setattr(mink3, "cross", lambda a, b: -right(a, b))
    code, out, _ = run(capsys, "verify", "--suite", "algebra", "--samples", 500, "--seed", 3)
    assert code == 1
    failed = [line for line in out.splitlines() if line.startswith("[FAIL]")]
    assert any("lie_morphism" in f or "jacobi" in f for f in failed)
    assert "reproduce with" in out
