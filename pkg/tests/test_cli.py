from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from charnum.cli import parse_descendant, run


def capture(argv, env=None):
    out = io.StringIO()
    code = run(argv, out=out)
    return code, out.getvalue()


def test_gw_csv_rows():
    code, text = capture(["gw", "--target", "p2", "--dmax", "4", "--format", "csv"])
    assert code == 0
    rows = text.strip().splitlines()
    assert rows[0] == "d,insertions,value"
    assert len(rows) == 5
    assert rows[-1] == "4,T2^11,620"


def test_metric_prints_exact_matrix():
    code, text = capture(["metric", "--target", "p2"])
    assert code == 0
    assert "exp(2*y0)" in text
    assert "2*y1^2 + 2*y2" in text


def test_compute_json_schema():
    code, text = capture(["compute", "--target", "p2", "--genus", "0", "--dmax", "2"])
    assert code == 0
    records = json.loads(text)
    assert {"d": 1, "a": 2, "b": 0, "c": 0, "value": "1"} in records
    assert all(set(r) == {"d", "a", "b", "c", "value"} for r in records)


def test_compute_quadric_bidegree_box():
    code, text = capture(["compute", "--target", "p1xp1", "--genus", "0", "--dmax", "2,1"])
    assert code == 0
    records = json.loads(text)
    assert all(r["d"][0] <= 2 and r["d"][1] <= 1 for r in records)
    assert any(r["d"] == [1, 1] and r["a"] == 3 and r["value"] == "1" for r in records)


def test_genus2_scope_gate_exit3():
    code, _ = capture(["compute", "--target", "p2", "--genus", "2", "--dmax", "3"])
    assert code == 3


def test_genus2_requires_virtual_seeds():
    code, _ = capture(["compute", "--target", "p2", "--genus", "2", "--dmax", "4"])
    assert code == 3


def test_genus2_with_virtual_file(tmp_path):
    path = tmp_path / "virt.seeds"
    path.write_text("4;13,0,0;0\n")
    code, text = capture(
        ["compute", "--target", "p2", "--genus", "2", "--dmax", "4", "--virtual2", str(path)]
    )
    assert code == 0
    json.loads(text)


def test_genus1_seed_bound_exceeded_exit3():
    code, _ = capture(["compute", "--target", "p2", "--genus", "1", "--dmax", "6"])
    assert code == 3


def test_usage_error_exit2():
    code, _ = capture(["compute", "--target", "p2", "--genus", "5", "--dmax", "2"])
    assert code == 2
    code, _ = capture(["compute", "--target", "gr24", "--genus", "0", "--dmax", "1"])
    assert code == 2


def test_descendant_spec_parsing():
    genus, degrees, insertions, target = parse_descendant(
        "tau0(T2)^4 tau1(T1)^1 @ g=0 d=2 target=p2"
    )
    assert (genus, degrees, target) == (0, (2,), "p2")
    assert sorted(insertions) == [(0, 2)] * 4 + [(1, 1)]
    with pytest.raises(ValueError):
        parse_descendant("nonsense @ g=0 d=1")
    with pytest.raises(ValueError):
        parse_descendant("tau0(T2)")


def test_descendant_value_and_cache(tmp_path):
    argv = [
        "descendant",
        "tau0(T2)^4 tau1(T1)^1 @ g=0 d=2 target=p2",
        "--cache",
        str(tmp_path / "c.cache"),
    ]
    code, text = capture(argv)
    assert (code, text.strip()) == (0, "1")
    code, text = capture(argv)  # warm
    assert (code, text.strip()) == (0, "1")


def test_descendant_genus1_first_descendant():
    code, text = capture(
        ["descendant", "tau0(T2)^9 @ g=1 d=3 target=p2", "--no-cache"]
    )
    assert (code, text.strip()) == (0, "1")


def test_descendant_genus1_rejects_high_psi():
    code, _ = capture(["descendant", "tau2(T2)^1 tau0(T2)^5 @ g=1 d=2", "--no-cache"])
    assert code == 2


def test_custom_geometry_config(tmp_path):
    from charnum.geometry import builtin_geometry

    path = tmp_path / "plane.geom"
    path.write_text(builtin_geometry("p2").to_text().replace("name p2", "name myplane"))
    code, text = capture(["metric", "--target", str(path)])
    assert code == 0 and "2*y1^2 + 2*y2" in text


def test_descendant_on_quadric():
    code, text = capture(
        ["descendant", "tau0(T3)^3 @ g=0 d=1,1 target=p1xp1", "--no-cache"]
    )
    assert (code, text.strip()) == (0, "1")


def test_gr24_insufficiency_exit3():
    code, _ = capture(["gw", "--target", "gr24", "--dmax", "2"])
    assert code == 3


def test_verify_suites_pass():
    for suite in ("p2-genus0", "metric"):
        code, text = capture(["verify", "--suite", suite])
        assert code == 0, text
        assert text.strip().endswith(f"ok {suite}")


def test_determinism_two_cold_runs():
    cmd = [
        sys.executable,
        "-m",
        "charnum.cli",
        "compute",
        "--target",
        "p2",
        "--genus",
        "0",
        "--dmax",
        "3",
        "--format",
        "json",
    ]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
