import json

import pytest

# Project
from cli.runner import run_cli


@pytest.fixture
def triangle_files(write_csv):
    return write_csv("b.csv", [[4, 2]]), write_csv("a.csv", [[6, 8]])


def test_project_l1min(triangle_files, capsys):
    x, y = triangle_files
    assert run_cli(["project", "--method", "l1min", "--x", str(x), "--y", str(y)]) == 0
    out = capsys.readouterr().out
    assert "alpha 1.5" in out
    assert "equality: 14 = 9 + 5" in out
    assert "predicted equality" in out


def test_project_l1_operator_is_strict(triangle_files, capsys):
    x, y = triangle_files
    assert run_cli(["project", "--method", "l1op", "--x", str(x), "--y", str(y)]) == 0
    assert "strict inequality" in capsys.readouterr().out


def test_project_json_report(triangle_files, tmp_path):
    x, y = triangle_files
    out = tmp_path / "project.json"
    assert run_cli(["project", "--method", "eucl", "--x", str(x), "--y", str(y), "--json", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["command"] == "project"
    assert report["alpha"] == 2.0
    assert report["verdicts"][0]["relation"] == "EQUALITY"


def test_project_dependent_pair(write_csv, capsys):
    x = write_csv("x.csv", [[1, 2]])
    y = write_csv("y.csv", [[2, 4]])
    assert run_cli(["project", "--method", "l1min", "--x", str(x), "--y", str(y)]) == 0
    assert "multiple of x" in capsys.readouterr().out


def test_decompose_svd_diagonal(write_csv, capsys):
    path = write_csv("diag31.csv", [[3, 0], [0, 1]])
    assert run_cli(["decompose", "--method", "svd", "-k", "2", str(path)]) == 0
    out = capsys.readouterr().out
    assert "deltas 3, 1" in out
    assert "accounting L2: equality: 10 = 10" in out


def test_decompose_l1min_skips_accounting(write_csv, capsys):
    path = write_csv("m.csv", [[3, 1, 2], [1, 4, 0], [2, 0, 5]])
    assert run_cli(["decompose", "--method", "l1min", "-k", "1", str(path)]) == 0
    assert "norm accounting is skipped" in capsys.readouterr().out


def test_decompose_exhaustive_tsvd(write_csv, tmp_path):
    path = write_csv("m.csv", [[3, 1, -2], [1, -4, 0.5], [2, 0.5, 5], [-1, 2, 2]])
    out = tmp_path / "tsvd.json"
    assert run_cli(["decompose", "--method", "tsvd", "-k", "3", "--exhaustive", str(path), "--json", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["steps"][0]["start"] == "exhaustive"
    assert report["accounting"]["relation"] == "STRICT_INEQUALITY"


def test_decompose_reports_are_deterministic(write_csv, tmp_path):
    path = write_csv("m.csv", [[3, 1, 2], [1, 4, 0], [2, 0, 5]])
    reports = []
    for name in ("1.json", "2.json"):
        out = tmp_path / name
        assert run_cli(["decompose", "--method", "tsvd", "-k", "3", str(path), "--json", str(out)]) == 0
        reports.append(out.read_bytes())
    assert reports[0] == reports[1]


def test_tsvd_ignores_tolerance(write_csv, tmp_path):
    path = write_csv("m.csv", [[3, 1, 2], [1, 4, 0], [2, 0, 5]])
    plain, tolerant = tmp_path / "plain.json", tmp_path / "tolerant.json"
    assert run_cli(["decompose", "--method", "tsvd", "-k", "3", str(path), "--json", str(plain)]) == 0
    assert run_cli(["decompose", "--method", "tsvd", "-k", "3", "--tol", "0.5", str(path), "--json", str(tolerant)]) == 0
    assert plain.read_bytes() == tolerant.read_bytes()


def test_timings_add_wall_time(write_csv, tmp_path):
    path = write_csv("m.csv", [[3, 1], [1, 4]])
    out = tmp_path / "timed.json"
    assert run_cli(["decompose", "--method", "svd", "-k", "1", "--timings", str(path), "--json", str(out)]) == 0
    assert json.loads(out.read_text())["wall_time"] >= 0


def test_conjugate(write_csv, capsys):
    path = write_csv("rows.csv", [[1, 1], [1, 0]])
    assert run_cli(["conjugate", "--p", "1", str(path)]) == 0
    out = capsys.readouterr().out
    assert "y2 0.5 -0.5" in out


def test_verify_passes(write_csv, capsys):
    path = write_csv("m.csv", [[1, 2, 3], [4, 5, 6.5], [7, 8.5, 10]])
    assert run_cli(["verify", str(path)]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert "All invariant checks passed." in out


def test_header_and_delimiter(write_csv, capsys):
    path = write_csv("m.csv", "a;b\n3;0\n0;1\n")
    assert run_cli(["decompose", "--method", "tsvd", "-k", "2", "--header", "--delimiter", ";", str(path)]) == 0
    assert "deltas 3, 1" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["project", "--method", "nope", "--x", "a", "--y", "b"],
        ["decompose", "--method", "svd", "m.csv"],
        [],
    ],
)
def test_usage_errors(argv):
    assert run_cli(argv) == 2


def test_numerical_errors_exit_2(write_csv, capsys):
    x = write_csv("x.csv", [[0, 0]])
    y = write_csv("y.csv", [[1, 2]])
    assert run_cli(["project", "--method", "eucl", "--x", str(x), "--y", str(y)]) == 2
    err = capsys.readouterr().err
    assert "The operation is undefined for the zero vector." in err
    assert "trace-phrase" in err

    path = write_csv("m.csv", [[1, 2], [3, 4]])
    assert run_cli(["decompose", "--method", "svd", "-k", "3", str(path)]) == 2


def test_io_errors_exit_3(tmp_path, write_csv, capsys):
    assert run_cli(["verify", str(tmp_path / "missing.csv")]) == 3
    assert "could not be read" in capsys.readouterr().err

    path = write_csv("bad.csv", "1,x\n")
    assert run_cli(["verify", str(path)]) == 3
    assert "row 1, column 2" in capsys.readouterr().err
