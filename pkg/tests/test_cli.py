import json
import math

import pytest

from qdisc.cli import main

TRINE_DOC = {
    "states": [
        {"angles": {"theta": math.pi / 2, "phi": 0.0}},
        {"angles": {"theta": math.pi / 2, "phi": 2 * math.pi / 3}},
        {"angles": {"theta": math.pi / 2, "phi": 4 * math.pi / 3}},
    ]
}


@pytest.fixture
def trine_file(tmp_path):
    path = tmp_path / "trine.json"
    path.write_text(json.dumps(TRINE_DOC))
    return str(path)


def test_solve_report(trine_file, tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["solve", trine_file, "--oracle-check", "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["solution"]["case"] == "common-latitude"
    assert abs(rep["solution"]["p_error"] - 1 / 3) <= 1e-9
    assert rep["certificate"]["verdict"] == "optimal"
    assert rep["oracle"]["agrees"] is True
    assert len(rep["ensemble"]["states"]) == 3


def test_solve_then_verify_own_output(trine_file, tmp_path):
    report = tmp_path / "report.json"
    assert main(["solve", trine_file, "--out", str(report)]) == 0
    assert main(["verify", trine_file, str(report)]) == 0


def test_solve_deterministic_output(trine_file, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    main(["solve", trine_file, "--out", str(out1)])
    main(["solve", trine_file, "--out", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()


def test_solve_report_echo_reproduces(trine_file, tmp_path):
    report = tmp_path / "report.json"
    main(["solve", trine_file, "--out", str(report)])
    echo = json.loads(report.read_text())["ensemble"]
    echo_file = tmp_path / "echo.json"
    echo_file.write_text(json.dumps(echo))
    report2 = tmp_path / "report2.json"
    main(["solve", str(echo_file), "--out", str(report2)])
    # the echoed ensemble reproduces the whole report bit-for-bit
    assert report.read_bytes() == report2.read_bytes()


def test_unsupported_regime_exit_code(tmp_path, capsys):
    doc = {"states": [{"bloch": [0, 0, 1]}, {"bloch": [1, 0, 0]},
                      {"bloch": [0, 1, 0]}],
           "priors": [0.5, 0.3, 0.2]}
    path = tmp_path / "unequal.json"
    path.write_text(json.dumps(doc))
    assert main(["solve", str(path)]) == 2
    assert "oracle" in capsys.readouterr().err


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{nope")
    assert main(["solve", str(path)]) == 1
    err = capsys.readouterr().err
    assert "malformed" in err


def test_missing_file_exit_code(tmp_path):
    assert main(["solve", str(tmp_path / "absent.json")]) == 1


def test_verify_swapped_povm_exit_code(trine_file, tmp_path, capsys):
    report = tmp_path / "report.json"
    main(["solve", trine_file, "--out", str(report)])
    povm = json.loads(report.read_text())["solution"]["canonical_povm"]
    povm["elements"][0], povm["elements"][1] = (povm["elements"][1],
                                                povm["elements"][0])
    swapped = tmp_path / "swapped.json"
    swapped.write_text(json.dumps(povm))
    code = main(["verify", trine_file, str(swapped), "--out",
                 str(tmp_path / "v.json")])
    assert code == 3
    cert = json.loads((tmp_path / "v.json").read_text())["certificate"]
    assert cert["verdict"] != "optimal"


def test_verify_non_complete_povm(trine_file, tmp_path):
    bad = {"elements": [{"scalar": 0.5, "bloch": [0.5, 0, 0]},
                        {"scalar": 0.2, "bloch": [0, 0, 0.2]},
                        {"scalar": 0.1, "bloch": [0, 0, 0]}]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    assert main(["verify", trine_file, str(path)]) == 1


def test_oracle_command(trine_file, tmp_path):
    out = tmp_path / "oracle.json"
    assert main(["oracle", trine_file, "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert abs(rep["dual"]["p_error"] - 1 / 3) <= 1e-8
    assert rep["certificate"]["verdict"] == "optimal"


def test_oracle_handles_unequal_mixed(tmp_path):
    doc = {"states": [{"bloch": [0, 0, 0.7]}, {"bloch": [0.4, 0, 0]},
                      {"bloch": [0, 0.2, -0.3]}],
           "priors": [0.5, 0.25, 0.25]}
    path = tmp_path / "mixed.json"
    path.write_text(json.dumps(doc))
    out = tmp_path / "oracle.json"
    assert main(["oracle", str(path), "--out", str(out)]) == 0


def test_simulate_command(trine_file, tmp_path):
    out = tmp_path / "sim.json"
    csv = tmp_path / "confusion.csv"
    code = main(["simulate", trine_file, "--use-solver", "--trials", "20000",
                 "--seed", "7", "--out", str(out), "--confusion-csv",
                 str(csv)])
    assert code == 0
    rep = json.loads(out.read_text())
    sim = rep["simulation"]
    assert sim["trials"] == 20000
    assert abs(sim["empirical_error"] - sim["analytic_error"]) \
        <= 5 * sim["standard_error"]
    assert csv.read_text().startswith("prepared,outcome_0")


def test_simulate_with_povm_file(trine_file, tmp_path):
    report = tmp_path / "report.json"
    main(["solve", trine_file, "--out", str(report)])
    out = tmp_path / "sim.json"
    code = main(["simulate", trine_file, str(report), "--trials", "5000",
                 "--out", str(out)])
    assert code == 0


def test_family_command(tmp_path):
    doc = {"states": [{"bloch": [1, 0, 0]}, {"bloch": [0, 1, 0]},
                      {"bloch": [-1, 0, 0]}, {"bloch": [0, -1, 0]}]}
    path = tmp_path / "square.json"
    path.write_text(json.dumps(doc))
    out = tmp_path / "family.json"
    assert main(["family", str(path), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["family"]["dimension"] == 1
    assert rep["family"]["non_unique"] is True
    minimal = rep["family"]["minimal_povm"]["elements"]
    nonzero = [el for el in minimal if abs(el["scalar"]) > 1e-12]
    assert len(nonzero) <= 4


def test_export_bloch(trine_file, tmp_path):
    out = tmp_path / "bloch.csv"
    assert main(["export-bloch", trine_file, "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "kind,index,x,y,z,weight"
    kinds = [line.split(",")[0] for line in lines[1:]]
    assert kinds.count("state") == 3
    assert kinds.count("element") == 3
    assert (tmp_path / "bloch.png").exists()


def test_export_bloch_no_figure(trine_file, tmp_path):
    out = tmp_path / "bloch.csv"
    assert main(["export-bloch", trine_file, "--out", str(out),
                 "--no-figure"]) == 0
    assert not (tmp_path / "bloch.png").exists()


def test_export_bloch_states_only_stdout(trine_file, capsys):
    assert main(["export-bloch", trine_file, "--states-only"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 4
