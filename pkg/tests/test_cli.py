import json
import subprocess
import sys

import pytest

from quiverhall.cli import main

A1 = '{"vertices": 1, "arrows": []}'
A2 = '{"vertices": 2, "arrows": [[1, 2]]}'


@pytest.fixture
def quiver_files(tmp_path):
    a1 = tmp_path / "a1.json"
    a1.write_text(A1)
    a2 = tmp_path / "a2.json"
    a2.write_text(A2)
    return {"a1": str(a1), "a2": str(a2), "dir": tmp_path}


def test_verify_pass_exit_zero(quiver_files, capsys):
    code = main(["--quiver", quiver_files["a1"], "--q", "2",
                 "--suite", "quantum-group"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["suite"] == "quantum-group"
    assert all(c["status"] == "pass" for c in out["checks"])
    assert all(set(c) == {"name", "status", "lhs", "rhs"} for c in out["checks"])


def test_negative_control_exit_one(quiver_files, capsys):
    code = main(["--quiver", quiver_files["a1"], "--q", "2",
                 "--suite", "quantum-group", "--perturb"])
    assert code == 1
    out = json.loads(capsys.readouterr().out)
    assert any(c["status"] == "fail" for c in out["checks"])


def test_bad_input_exit_two(tmp_path, capsys):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert main(["--quiver", str(empty), "--q", "2", "--suite", "ringel"]) == 2
    missing = tmp_path / "missing.json"
    assert main(["--quiver", str(missing), "--q", "2", "--suite", "ringel"]) == 2
    good = tmp_path / "good.json"
    good.write_text(A2)
    assert main(["--quiver", str(good), "--q", "4", "--suite", "ringel"]) == 2


def test_report_determinism(quiver_files):
    out1 = quiver_files["dir"] / "r1.json"
    out2 = quiver_files["dir"] / "r2.json"
    args = ["--quiver", quiver_files["a2"], "--q", "2", "--suite",
            "quotient-relations", "--samples", "6", "--seed", "3"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["seed"] == 3
    assert len(report["checks"]) == 6


def test_table_vect(quiver_files, capsys):
    code = main(["--quiver", quiver_files["a1"], "--q", "2",
                 "--table", "--bound", "2"])
    assert code == 0
    rows = json.loads(capsys.readouterr().out)
    # the (k, k, k^2) row: Hall number q + 1 = 3, constant 1/2
    kk = [r for r in rows if r["hall_number"] == 3]
    assert len(kk) == 1
    assert kk[0]["bridgeland_constant"] == "1/2"
    assert kk[0]["A"] == kk[0]["B"] == "M[1]"


def test_table_a2_q3(quiver_files, capsys):
    a2q3 = main(["--quiver", quiver_files["a2"], "--q", "3",
                 "--table", "--bound", "2"])
    assert a2q3 == 0
    rows = json.loads(capsys.readouterr().out)
    hit = [r for r in rows
           if r["A"] == "M[1,0]" and r["B"] == "M[0,1]" and "(1)" in r["C"]]
    assert len(hit) == 1
    assert hit[0]["bridgeland_constant"] == "2"
    assert hit[0]["hall_number"] == 1


def test_csv_format(quiver_files, capsys):
    code = main(["--quiver", quiver_files["a1"], "--q", "2",
                 "--suite", "ringel", "--format", "csv"])
    assert code == 0
    text = capsys.readouterr().out
    assert text.splitlines()[0] == "name,status,lhs,rhs"


def test_reflection_default_sink(quiver_files, capsys):
    code = main(["--quiver", quiver_files["a2"], "--q", "2",
                 "--suite", "reflection"])
    assert code == 0


def test_console_script_runs(quiver_files):
    proc = subprocess.run(
        [sys.executable, "-m", "quiverhall.cli", "--quiver", quiver_files["a1"],
         "--q", "2", "--suite", "torus-commutation"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    json.loads(proc.stdout)
