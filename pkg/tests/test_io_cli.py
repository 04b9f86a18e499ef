import cmath
import json
import shutil
import subprocess

import numpy as np
import pytest

from vrkit import io, verify
from vrkit.cli import parse_complex, run
from vrkit.disc import region_VT
from vrkit.figures import FIGURES, count_paths
from vrkit.geometry import polyline_distance
from vrkit.halfplane import region_VI
from vrkit.loewner import Slit, integrate, thunder_check
from vrkit.representations import sample_driving


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# parsing

@pytest.mark.parametrize("text, z", [("1+1i", 1 + 1j), ("0.5", 0.5), ("-i", -1j), ("1+2j", 1 + 2j),
                                     ("0.636+0.636i", 0.636 + 0.636j), ("-0.25-1.5i", -0.25 - 1.5j)])
def test_parse_complex(text, z):
    assert parse_complex(text) == z


def test_parse_complex_rejects_garbage():
    with pytest.raises(ValueError):
        parse_complex("1+")


# JSON layer

def test_dumps_is_canonical():
    assert io.dumps({"b": 1, "a": [2.0, None]}) == '{"a":[2.0,null],"b":1}\n'
    with pytest.raises(ValueError):
        io.dumps({"a": float("inf")})


def test_region_roundtrip_is_byte_identical():
    for region in (region_VI(1 + 1j), region_VT(0.636 + 0.636j, 0.5, resolution=1e-4)):
        text = io.dumps(io.region_to_json(region))
        back = io.region_from_json(io.loads(text))
        assert io.dumps(io.region_to_json(back)) == text
        assert [p.name for p in back.pieces] == [p.name for p in region.pieces]


def test_rebuilt_region_classifies_by_winding():
    region = region_VT(0.636 + 0.636j, 0.5, resolution=1e-4)
    back = io.region_from_json(io.loads(io.dumps(io.region_to_json(region))))
    rng = np.random.default_rng(2)
    w = 0.9 * rng.uniform(-1, 1, 300) + 0.9j * rng.uniform(-1, 1, 300)
    poly, _ = region.boundary_polyline()
    far = polyline_distance(poly, w) > 1e-6
    assert np.array_equal(region.classify_many(w[far], 1e-9)[0], back.classify_many(w[far], 1e-9)[0])


def test_trajectory_roundtrip_is_byte_identical():
    d = sample_driving(10, (0.0, 50.0), seed=8)
    tr = integrate(1 + 1j, d, d.t_end)
    text = io.dumps(io.trajectory_to_json(tr, thunder_check(tr)))
    traj, rep, _ = io.trajectory_from_json(io.loads(text))
    assert io.dumps(io.trajectory_to_json(traj, rep)) == text
    assert np.array_equal(traj.w, tr.w)


def test_driving_roundtrip():
    for d in (Slit.constant(0.0), sample_driving(3, seed=1)):
        assert io.driving_from_json(io.driving_to_json(d)) == d


def test_schema_checked():
    with pytest.raises(io.SchemaError):
        io.loads('{"schema": "other/9", "type": "region"}')


def test_csv_columns():
    t = np.linspace(0, 1, 5)
    text = io.curve_to_csv(t, np.exp(1j * t))
    assert text.splitlines()[0] == "t,re,im"
    t2, w2 = io.curve_from_csv(text)
    assert np.array_equal(t2, t) and np.array_equal(w2, np.exp(1j * t))


# CLI

def test_region_svg(capsys):
    code, out, _ = call(capsys, "region", "--kind", "VI", "--z0", "1+1i", "--format", "svg")
    assert code == 0 and "<svg" in out and count_paths(out, "boundary") == 3


def test_region_vt_has_two_arcs(capsys):
    code, out, _ = call(capsys, "region", "--kind", "VT", "--tau", "0.5", "--z0", "0.636+0.636i")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "vrkit/1" and [p["name"] for p in doc["pieces"]] == ["s1", "s2"]


@pytest.mark.parametrize("argv, code", [
    (["region", "--kind", "VR", "--z0", "0.5"], 3),
    (["region", "--kind", "VU", "--z0", "1.5"], 2),
    (["region", "--kind", "VI", "--z0", "1-1i"], 2),
    (["region", "--kind", "nope", "--z0", "0.5i"], 2),
    (["region", "--kind", "VT", "--z0", "0.5i"], 2),
    (["verify", "--suite", "nope"], 2),
    (["bogus"], 2),
    (["region", "--z0", "1+"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert call(capsys, *argv)[0] == code


def test_verify_exit_codes(capsys, monkeypatch):
    code, out, err = call(capsys, "verify", "--suite", "curve-identities", "--z0", "0.636+0.636i")
    assert code == 0 and json.loads(out)["passed"] and err.startswith("PASS")
    code, out, _ = call(capsys, "verify", "--suite", "f0")
    assert code == 0
    bad = verify.VerifyReport("f0", 1, [{"input": "x"}], 1, 1.0)
    monkeypatch.setattr(verify, "run_suite", lambda *a, **k: bad)
    code, out, err = call(capsys, "verify", "--suite", "f0")
    assert code == 1 and json.loads(out)["passed"] is False and err.startswith("FAIL")


def test_simulate_zero_driving(capsys):
    code, out, _ = call(capsys, "simulate", "--z0", "1+1i", "--T", "1")
    assert code == 0
    final = complex(*json.loads(out)["samples"][-1][1:])
    assert abs(final - cmath.sqrt(2j - 2)) < 1e-8


def test_simulate_exponent_zero_is_vertical(capsys):
    code, out, _ = call(capsys, "simulate", "--z0", "1+1i", "--exponent", "0", "--thunder")
    doc = json.loads(out)
    assert code == 0 and abs(doc["samples"][-1][1] - 1.0) < 1e-8
    assert doc["thunder"]["upper_strict"] is True


def test_simulate_random_is_deterministic(capsys, tmp_path):
    a = call(capsys, "simulate", "--z0", "1+1i", "--random", "--seed", "3")[1]
    b = call(capsys, "simulate", "--z0", "1+1i", "--random", "--seed", "3")[1]
    assert a == b
    f = tmp_path / "traj.json"
    f.write_text(a)
    code, c, _ = call(capsys, "simulate", "--z0", "1+1i", "--driving", str(f))
    assert code == 0 and c == a
    # re-emitting the parsed file reproduces it
    traj, rep, param = io.trajectory_from_json(io.loads(a))
    assert io.dumps(io.trajectory_to_json(traj, rep, param)) == a


def test_simulate_rejects_long_horizon(capsys, tmp_path):
    f = tmp_path / "d.json"
    f.write_text(json.dumps(io.driving_to_json(sample_driving(2, seed=0))))
    assert call(capsys, "simulate", "--z0", "1+1i", "--driving", str(f), "--T", "100")[0] == 2


def test_curve_csv(capsys):
    code, out, _ = call(capsys, "curve", "--kind", "C", "--z0", "1+1i", "--format", "csv", "--n", "11")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,re,im" and len(lines) == 12
    t, re, im = map(float, lines[-1].split(","))
    assert abs(re * im - 1) < 1e-12
    code, out, _ = call(capsys, "curve", "--kind", "Cplus", "--z0", "0.636+0.636i")
    assert code == 0 and json.loads(out)["kind"] == "Cplus"


def test_figures(capsys, tmp_path):
    code, _, _ = call(capsys, "figure", "--name", "all", "--out", str(tmp_path))
    assert code == 0
    svgs = {name: (tmp_path / f"{name}.svg").read_text() for name in FIGURES}
    assert count_paths(svgs["fig1"], "boundary") == 4
    assert count_paths(svgs["fig4"], "boundary") == 6
    assert count_paths(svgs["fig5"], "region") == 3
    code, out, _ = call(capsys, "figure", "--name", "fig2")
    assert code == 0 and "<svg" in out


def test_console_script():
    exe = shutil.which("vrkit")
    if exe is None:
        pytest.skip("console script not installed")
    res = subprocess.run([exe, "region", "--kind", "VR", "--z0", "0.5"], capture_output=True, text=True)
    assert res.returncode == 3 and "error" in res.stderr
