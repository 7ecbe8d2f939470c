import csv
import io
import json
import subprocess
import sys

import pytest

from lensinv.cli import CSV_COLUMNS, main


def run(*args):
    return subprocess.run([sys.executable, "-m", "lensinv", *args],
                          capture_output=True, text=True, timeout=120)


def test_compute_text():
    res = run("compute", "--p", "7", "--q", "1", "--k", "1", "--samples", "20", "--seed", "1")
    assert res.returncode == 0, res.stderr
    assert "0.0810056738" in res.stdout


def test_compute_json():
    res = run("compute", "--p", "7", "--q", "2", "--k", "3", "--format", "json", "--samples", "5")
    assert res.returncode == 0
    data = json.loads(res.stdout)
    assert data["mean"] == pytest.approx(0.4089909518, rel=1e-9)
    assert data["constant"] is True
    assert len(data["samples"]) == 5


@pytest.mark.parametrize("pqk", [("4", "2", "1"), ("9", "2", "3"), ("7", "1", "5")])
def test_invalid_params_exit_2(pqk):
    p, q, k = pqk
    res = run("compute", "--p", p, "--q", q, "--k", k)
    assert res.returncode == 2
    assert "error" in res.stderr


def test_bad_flag_values_rejected():
    with pytest.raises(SystemExit):
        main(["compute", "--p", "7", "--q", "1", "--k", "1", "--samples", "0"])
    with pytest.raises(SystemExit):
        main(["compute", "--p", "7", "--q", "1", "--k", "1", "--tol", "-1"])


def test_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--p-min", "3", "--p-max", "6", "--samples", "3",
                 "--format", "csv", "-o", str(out)]) == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[0] == CSV_COLUMNS
    assert rows[0] == "p,q,k,mean_const,max_dev,conjecture,rel_err".split(",")
    assert len(rows) == 1 + 2 + 2 + 8 + 2   # p = 3, 4, 5, 6: (#q) x (#k)
    assert all(float(r[-1]) <= 1e-8 for r in rows[1:])


def test_sweep_pairs_json():
    res = run("sweep", "--p-min", "7", "--p-max", "7", "--samples", "2", "--pairs",
              "--format", "json")
    assert res.returncode == 0
    pairs = {(d["q1"], d["q2"]): d for d in json.loads(res.stdout)["pairs"]}
    assert pairs[(2, 4)]["equal"] and pairs[(2, 4)]["witness"] == {"1": 2, "2": 3, "3": 1}
    assert pairs[(1, 6)]["equal"]
    assert not pairs[(1, 2)]["equal"]


def test_fixed_seed_output_is_byte_identical():
    args = ("sweep", "--p-min", "5", "--p-max", "7", "--samples", "3", "--seed", "3",
            "--format", "csv")
    first, second = run(*args), run(*args)
    assert first.returncode == 0
    assert first.stdout == second.stdout
    other = run(*args[:-4], "--seed", "4", "--format", "csv")
    assert other.stdout != first.stdout


def test_verify_matrices():
    res = run("verify-matrices", "--samples", "3")
    assert res.returncode == 0, res.stdout
    assert "6/6" in res.stdout


def test_published_values_fail_at_tight_tolerance():
    res = run("verify-paper", "--samples", "3", "--tol", "1e-12", "--format", "json")
    assert res.returncode == 1
    data = json.loads(res.stdout)
    assert data["total"] == 6
    assert all(r["rel_err"] <= 5e-9 for r in data["rows"])


def test_check_derivatives():
    for q in ("1", "2"):
        res = run("check-derivatives", "--p", "7", "--q", q, "--k", "1")
        assert res.returncode == 0, res.stdout
        assert "1/1" in res.stdout


def test_help_documents_csv_columns():
    res = run("sweep", "--help")
    assert "p,q,k,mean_const,max_dev,conjecture,rel_err" in res.stdout
