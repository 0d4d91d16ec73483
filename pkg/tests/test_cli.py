import json

import pytest

from peierls.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


# ---------------------------------------------------------------------------
# counts
# ---------------------------------------------------------------------------


def test_counts_csv_bound_column(capsys):
    code, out = run(["counts", "--k-max", "8"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "k,exact,sa_walk,walk_bound"
    rows = [line.split(",") for line in lines[1:]]
    assert [r[3] for r in rows] == ["300", "2000", "12500", "75000", "437500"]
    for r in rows:
        assert int(r[1]) <= int(r[3])


def test_counts_files_byte_identical(tmp_path, capsys):
    prefix1 = tmp_path / "a"
    prefix2 = tmp_path / "b"
    assert main(["counts", "--k-max", "6", "--out", str(prefix1)]) == 0
    assert main(["counts", "--k-max", "6", "--out", str(prefix2)]) == 0
    capsys.readouterr()
    for suffix in (".csv", "_classes.csv", ".json"):
        a = (tmp_path / f"a{suffix}").read_bytes()
        b = (tmp_path / f"b{suffix}").read_bytes()
        assert a == b
    doc = json.loads((tmp_path / "a.json").read_text())
    assert doc["counts"][0]["exact"] == 1


def test_counts_json_stdout(capsys):
    code, out = run(["counts", "--k-max", "6", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["rule"] == "five"
    assert {row["k"]: row["exact"] for row in doc["counts"]} == {4: 1, 5: 0, 6: 4}


def test_counts_infeasible_cap_exits_3(capsys):
    code = main(["counts", "--k-max", "12", "--cluster-cap", "4"])
    capsys.readouterr()
    assert code == 3


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def test_bounds_single_point_tail(capsys):
    code, out = run(["bounds", "--c", "0.9", "--r", "4", "--mode", "analytic"], capsys)
    assert code == 0
    header, row = out.strip().split("\n")
    cols = dict(zip(header.split(","), row.split(",")))
    assert abs(float(cols["tail"]) - 0.08) < 1e-12
    assert cols["guarantee"] == "tail"


def test_bounds_sweep_flags_divergent_rows(capsys):
    code, out = run(["bounds", "--sweep", "0.78:0.9:0.04", "--r", "5"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    assert len(rows) == 4
    flagged = [r for r in rows if float(r["c"]) <= 0.8]
    assert flagged and all(r["guarantee"] == "none" and r["tail"] == "" for r in flagged)
    fine = [r for r in rows if float(r["c"]) > 0.8]
    assert fine and all(r["guarantee"] == "tail" for r in fine)


def test_bounds_sa_mode_threshold_below_point_eight(capsys):
    code, out = run(
        ["bounds", "--c", "0.9", "--r", "5", "--mode", "sa", "--k-max", "10", "--format", "json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["rows"][0]["threshold_bound"] < 0.8


def test_bounds_requires_concentration(capsys):
    code = main(["bounds", "--r", "4"])
    capsys.readouterr()
    assert code == 2


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def test_simulate_estimate_deterministic(capsys):
    args = ["simulate", "--L", "8", "--c", "0.7", "--trials", "300", "--seed", "3", "--workers", "1"]
    code1, out1 = run(args, capsys)
    code2, out2 = run(args, capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    header, row = out1.strip().split("\n")
    assert header == "L,c,trials,value,std_error,seed"
    assert row.startswith("8,0.7,300,")


def test_simulate_json(capsys):
    code, out = run(
        ["simulate", "--L", "8", "--c", "0.7", "--trials", "200", "--seed", "1",
         "--observable", "crossing", "--format", "json", "--workers", "2"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["trials"] == 200 and doc["L"] == 8
    assert 0.0 <= doc["value"] <= 1.0


def test_simulate_bisect_interval(capsys):
    code, out = run(
        ["simulate", "--L", "12", "--bisect", "--trials", "300", "--tol", "0.01",
         "--seed", "5", "--workers", "1", "--format", "json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert 1 / 3 < doc["threshold"] < 4 / 5
    assert len(doc["trace"]) >= 7


def test_simulate_requires_mode(capsys):
    code = main(["simulate", "--L", "8"])
    capsys.readouterr()
    assert code == 2


def test_bad_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["counts", "--k-max", "8", "--bogus"])
    capsys.readouterr()
    assert exc.value.code == 2


def test_threads_env_override(monkeypatch, capsys):
    monkeypatch.setenv("PEIERLS_THREADS", "2")
    args = ["simulate", "--L", "8", "--c", "0.6", "--trials", "200", "--seed", "7"]
    code1, out1 = run(args, capsys)
    monkeypatch.setenv("PEIERLS_THREADS", "1")
    code2, out2 = run(args, capsys)
    assert code1 == code2 == 0
    assert out1 == out2


# ---------------------------------------------------------------------------
# manifest
# ---------------------------------------------------------------------------


def test_manifest_show_and_check(tmp_path, capsys):
    prefix = tmp_path / "run"
    assert main(["counts", "--k-max", "6", "--out", str(prefix)]) == 0
    manifest_path = tmp_path / "run.manifest.json"
    assert manifest_path.exists()

    code, out = run(["manifest", str(manifest_path), "--show"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "counts"
    assert set(doc["outputs"]) == {"run.csv", "run_classes.csv", "run.json"}

    code, out = run(["manifest", str(manifest_path)], capsys)
    assert code == 0
    assert "ok" in out


def test_manifest_detects_tampering(tmp_path, capsys):
    prefix = tmp_path / "run"
    assert main(["counts", "--k-max", "6", "--out", str(prefix)]) == 0
    manifest_path = tmp_path / "run.manifest.json"
    doc = json.loads(manifest_path.read_text())
    doc["outputs"]["run.csv"] = "sha256:" + "0" * 64
    manifest_path.write_text(json.dumps(doc))
    code = main(["manifest", str(manifest_path)])
    capsys.readouterr()
    assert code == 1
