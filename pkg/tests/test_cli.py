import json

import pytest

from eigencurves import cli


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def example_file(tmp_path, capsys):
    path = tmp_path / "example.json"
    assert run(["gen", "paper-matrix", "-o", path], capsys)[0] == 0
    return path


@pytest.fixture
def two_line_file(tmp_path, capsys):
    path = tmp_path / "two.json"
    argv = ["gen", "synthetic-epsk", "--base", "1,2", "--eps-k", "1:-1,2:1", "-o", path]
    assert run(argv, capsys)[0] == 0
    return path


def test_gen_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run(["gen", "random", "--order", 4, "--seed", 7, "--b-profile", "degenerate", "-o", p], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_gen_to_stdout(capsys):
    code, out, _ = run(["gen", "synthetic-eps", "--eps", 0], capsys)
    assert code == 0
    assert json.loads(out)["b"] == [[0.0, 0.0, 0.0]] * 3


def test_gen_bad_parameters(tmp_path, capsys):
    out = tmp_path / "x.json"
    code, _, err = run(["gen", "sturm-liouville", "--p", -1, "-o", out], capsys)
    assert code == cli.EXIT_USAGE and not out.exists()
    assert run(["gen", "synthetic-epsk"], capsys)[0] == cli.EXIT_USAGE
    assert run(["gen", "random"], capsys)[0] == cli.EXIT_USAGE


def test_trace_writes_csv_and_svg(example_file, tmp_path, capsys):
    csv_path, svg_path = tmp_path / "t.csv", tmp_path / "t.svg"
    argv = ["trace", example_file, "--lo", -2, "--hi", 2, "--points", 9,
            "--out-csv", csv_path, "--out-svg", svg_path]
    assert run(argv, capsys)[0] == 0
    rows = csv_path.read_text().splitlines()
    assert rows[0] == "lambda,n,mu" and len(rows) >= 1 + 9 * 3
    assert svg_path.read_text().startswith("<?xml")


def test_trace_bad_grid_writes_nothing(example_file, tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, _, _ = run(["trace", example_file, "--points", 1, "--out-csv", out], capsys)
    assert code == cli.EXIT_USAGE and not out.exists()


def test_asymmetric_problem_file(example_file, tmp_path, capsys):
    doc = json.loads(example_file.read_text())
    doc["a"][0][1] += 1e-3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    out = tmp_path / "t.csv"
    assert run(["trace", bad, "--out-csv", out], capsys)[0] == cli.EXIT_USAGE
    assert not out.exists()
    assert run(["verify", bad], capsys)[0] == cli.EXIT_USAGE


def test_analyze_derivatives(two_line_file, capsys):
    code, out, _ = run(["analyze", two_line_file, "derivatives", "--point", "0.5,1.5"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["multiplicity"] == 2
    assert [round(float(x), 12) for x in doc["b_values"]] == [-1.0, 1.0]


def test_analyze_not_an_eigenpoint(two_line_file, capsys):
    code, _, err = run(["analyze", two_line_file, "derivatives", "--point", "0.5,1.7"], capsys)
    assert code == cli.EXIT_EIGENPOINT and err


def test_analyze_asymptotics_and_lines(example_file, capsys):
    code, out, _ = run(["analyze", example_file, "asymptotics"], capsys)
    assert code == 0 and len(json.loads(out)["eta"]) == 3
    code, out, _ = run(["analyze", example_file, "lines"], capsys)
    assert code == 0 and json.loads(out)["horizontal_lines"] == []


def test_geometry_levels(two_line_file, capsys):
    code, out, _ = run(["geometry", two_line_file, "--levels", "1.25,1.75"], capsys)
    assert code == 0
    assert [r["counts"] for r in json.loads(out)] == [[1, 0], [0, 2]]


def test_geometry_negative_level_syntax(two_line_file, capsys):
    code, out, _ = run(["geometry", two_line_file, "--levels=-1,1.75"], capsys)
    assert code == 0 and len(json.loads(out)) == 2


def test_geometry_errors(two_line_file, tmp_path, capsys):
    out = tmp_path / "g.json"
    assert run(["geometry", two_line_file, "--levels", 2, "-o", out], capsys)[0] == cli.EXIT_LEVEL
    argv = ["geometry", two_line_file, "--levels", 3, "--lo", -0.1, "--hi", 0.1, "-o", out]
    assert run(argv, capsys)[0] == cli.EXIT_GRID
    assert not out.exists()


def test_verify_problem_file(example_file, capsys):
    code, out, _ = run(["verify", example_file], capsys)
    assert code == 0
    assert out.splitlines()[0].startswith("eigensolver")
    assert all(" PASS " in line for line in out.splitlines() if not line.startswith(" "))


def test_verify_small_fuzz(capsys):
    code, out, _ = run(["verify", "--fuzz", 3, "--seed", 5], capsys)
    assert code == 0 and "FAIL" not in out


def test_verify_needs_input(capsys):
    assert run(["verify"], capsys)[0] == cli.EXIT_USAGE


def test_parse_helpers():
    assert cli.floats(["1,2", "3"]) == [1.0, 2.0, 3.0]
    assert cli.parse_eps_k("1:0.5,3:-2") == {1: 0.5, 3: -2.0}
    with pytest.raises(cli.UsageError):
        cli.parse_eps_k("1=0.5")
    with pytest.raises(cli.UsageError):
        cli.floats(["a"])
