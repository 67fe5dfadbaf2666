import csv
import io
import json

import pytest

from qmdos.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def read_csv(text):
    return list(csv.reader(io.StringIO(text)))


def test_density_n1(capsys):
    code, out = run(capsys, "density", "--n", "1", "--points", "3")
    assert code == 0
    assert read_csv(out) == [["E", "mu"], ["0", "1"], ["0.5", "1"], ["1", "1"]]


def test_density_n2(capsys):
    _, out = run(capsys, "density", "--n", "2", "--points", "5")
    assert ["0.5", "2"] in read_csv(out)


def test_density_n9_symmetric_peak(capsys):
    _, out = run(capsys, "density", "--n", "9", "--points", "501")
    rows = read_csv(out)[1:]
    mu = [r[1] for r in rows]
    assert mu == mu[::-1]
    vals = [float(v) for v in mu]
    assert vals.index(max(vals)) == 250


def test_figure1(capsys, tmp_path):
    path = tmp_path / "fig1.csv"
    assert main(["figure1", "--output", str(path)]) == 0
    rows = read_csv(path.read_text())
    assert rows[0] == ["E", "mu_n3", "mu_n6", "mu_n9"]
    assert len(rows) == 502


def test_output_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("QMDOS_OUTPUT_DIR", str(tmp_path))
    assert main(["identity", "--max-n", "5"]) == 0
    assert (tmp_path / "identity.csv").exists()


def test_normalize_json(capsys):
    code, out = run(capsys, "normalize", "--max-n", "12", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    assert doc["config"]["max_n"] == 12
    assert all(r[1] == 1 and r[2] is True for r in doc["rows"])


def test_omega_series_json(capsys):
    code, out = run(capsys, "omega-series", "--alpha", "3", "--jmax", "60", "--jstep", "10", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert float(doc["decay_rate"]["relative_error"]) < 0.02
    assert [r[0] for r in doc["rows"]] == [10, 20, 30, 40, 50, 60]


def test_richardson(capsys):
    code, out = run(capsys, "richardson", "--format", "json")
    doc = json.loads(out)
    assert abs(float(doc["estimate"]) - 1.9544100476) < 1e-6


def test_saddle_csv(capsys):
    code, out = run(capsys, "saddle", "--alpha", "2")
    rows = dict(read_csv(out)[1:])
    assert float(rows["lambda0"]) == 0
    assert abs(float(rows["f_second_at_saddle"]) + 2 / 3) < 1e-12
    assert abs(float(rows["prefactor_alpha2"]) - 1.9544100476) < 1e-9


def test_montecarlo(capsys):
    code, out = run(capsys, "montecarlo", "--n", "2", "--samples", "200000", "--bins", "20", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert sum(r[2] for r in doc["rows"]) == 200000


def test_verify_all_passes(capsys):
    code, out = run(capsys, "verify-all", "--max-n", "40")
    doc = json.loads(out)
    assert code == 0 and doc["all_passed"]
    rich = next(c for c in doc["checks"] if c["name"] == "richardson_constant")
    assert rich["reported_value"] == "1.9544100476"
    assert abs(float(rich["estimate"]) - 1.9544100476) < 1e-6


def test_verify_all_tampered_tolerance(capsys):
    code, out = run(capsys, "verify-all", "--max-n", "5", "--richardson-tol", "1e-40")
    doc = json.loads(out)
    assert code == 1 and not doc["all_passed"]
    assert [c["name"] for c in doc["checks"] if not c["passed"]] == ["richardson_constant"]


@pytest.mark.parametrize(
    "argv",
    [
        ["density", "--n", "0"],
        ["density", "--n", "3", "--points", "1"],
        ["omega-series", "--alpha", "x/2"],
        ["omega-series", "--alpha", "3/2"],
        ["omega-series", "--alpha", "5/2", "--jstep", "3"],
        ["montecarlo", "--n", "2", "--samples", "10"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_locale_independent_decimal(capsys):
    _, out = run(capsys, "density", "--n", "3", "--points", "4", "--precision-digits", "12")
    rows = read_csv(out)
    assert rows[1:] == [["0", "0"], ["0.333333333333", "1.5"], ["0.666666666667", "1.5"], ["1", "0"]]
