import json

import pytest

from app.cli import main

IDENTITY_2 = {"dim": 2, "entries": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]}
EMPTY_2 = {"modes": 2, "lattice_period": 1, "instructions": [], "input_wires": [0, 1], "output_wires": [0, 1]}


@pytest.fixture
def compiled(tmp_path, capsys):
    """Random 3-mode unitary compiled to a schedule; returns (target, schedule) paths."""
    target = str(tmp_path / "target.json")
    schedule = str(tmp_path / "schedule.json")
    assert main(["random", "--modes", "3", "--seed", "4", "--output", target]) == 0
    assert main(["compile", "--input", target, "--output", schedule]) == 0
    capsys.readouterr()
    return target, schedule


def test_random_compile_verify(compiled, capsys):
    target, schedule = compiled
    assert main(["verify", "--input", schedule, "--target", target]) == 0
    out = capsys.readouterr().out
    assert "max_deviation:" in out
    assert "tolerance: 1.00000000000000002e-08" in out


def test_compile_summary(tmp_path, capsys, write_json):
    target = str(tmp_path / "u4.json")
    assert main(["random", "--modes", "4", "--seed", "1", "--output", target]) == 0
    assert main(["compile", "--input", target, "--output", str(tmp_path / "s.json")]) == 0
    out = capsys.readouterr().out
    assert "modes: 4" in out
    assert "  beamsplitter: 6" in out
    assert "  phase: 4" in out
    assert "footprint: 4 rows x 4 columns" in out


def test_shear_summary(tmp_path, capsys):
    target = str(tmp_path / "k.json")
    schedule = str(tmp_path / "s.json")
    assert main(["random", "--target-kind", "shear", "--modes", "3", "--output", target]) == 0
    assert main(["compile", "--target-kind", "shear", "--input", target, "--output", schedule]) == 0
    out = capsys.readouterr().out
    assert "  shear: 3" in out
    assert "  shear-pair: 3" in out
    assert main(["verify", "--input", schedule, "--target", target, "--target-kind", "shear"]) == 0


def test_bogoliubov_round_trip(tmp_path):
    target = str(tmp_path / "ab.json")
    schedule = str(tmp_path / "s.json")
    assert main(["random", "--target-kind", "bogoliubov", "--modes", "2", "--seed", "3", "--output", target]) == 0
    assert main(["compile", "--target-kind", "bogoliubov", "--input", target, "--output", schedule]) == 0
    assert main(["verify", "--input", schedule, "--target", target, "--tolerance", "1e-7"]) == 0


def test_malformed_json_exits_2(write_json, capsys):
    path = write_json("bad.json", "{not json")
    assert main(["compile", "--input", path]) == 2
    assert "malformed JSON" in capsys.readouterr().err


def test_missing_input_exits_2(tmp_path):
    assert main(["compile", "--input", str(tmp_path / "nothing.json")]) == 2


def test_non_unitary_exits_1(write_json):
    path = write_json("bad.json", {"dim": 2, "entries": [[1, 0], [1, 0], [0, 0], [1, 0]]})
    assert main(["compile", "--input", path]) == 1


def test_perturbed_schedule_exits_1(compiled, write_json):
    target, schedule = compiled
    with open(schedule, encoding="utf-8") as handle:
        data = json.load(handle)
    victim = next(ins for ins in data["instructions"] if ins["role"] == "beamsplitter")
    victim["angles"][1] += 1e-3
    perturbed = write_json("perturbed.json", data)
    assert main(["verify", "--input", perturbed, "--target", target]) == 1


def test_perturbed_phase_node_is_a_deviation_not_a_structural_error(compiled, write_json, tmp_path):
    target, schedule = compiled
    with open(schedule, encoding="utf-8") as handle:
        data = json.load(handle)
    victim = next(ins for ins in data["instructions"] if ins["role"] == "phase")
    victim["angles"][1] += 1e-3
    perturbed = write_json("perturbed_phase.json", data)
    report = str(tmp_path / "report.json")
    assert main(["verify", "--input", perturbed, "--target", target, "--output", report]) == 1
    with open(report, encoding="utf-8") as handle:
        result = json.load(handle)
    assert result["within_tolerance"] is False
    assert result["max_deviation"] > 1e-5


def test_empty_schedule_matches_identity(write_json, capsys):
    schedule = write_json("empty.json", EMPTY_2)
    target = write_json("identity.json", IDENTITY_2)
    assert main(["verify", "--input", schedule, "--target", target]) == 0
    assert "max_deviation: 0.00000000000000000e+00" in capsys.readouterr().out


def test_mode_mismatch_exits_2(write_json):
    schedule = write_json("empty.json", EMPTY_2)
    target = write_json("u1.json", {"dim": 1, "entries": [[1.0, 0.0]]})
    assert main(["verify", "--input", schedule, "--target", target]) == 2


def test_negative_r_db_exits_2(compiled, capsys):
    _, schedule = compiled
    assert main(["simulate", "--input", schedule, "--r-db", "-1"]) == 2
    assert "r_db" in capsys.readouterr().err


def test_sweep_writes_a_list(tmp_path, write_json):
    schedule = str(tmp_path / "bs.json")
    half = 0.5**0.5
    target = write_json("bs_target.json", {"dim": 2, "entries": [[half, 0], [0, half], [0, half], [half, 0]]})
    assert main(["compile", "--input", target, "--output", schedule]) == 0
    report = str(tmp_path / "sweep.json")
    assert main(["simulate", "--input", schedule, "--sweep", "10", "20", "--seed", "1", "--output", report]) == 0
    with open(report, encoding="utf-8") as handle:
        reports = json.load(handle)
    assert [entry["r_db"] for entry in reports] == [10.0, 20.0]
    assert reports[0]["target_distance_frobenius"] > reports[1]["target_distance_frobenius"]


def test_single_simulation_report(compiled, tmp_path):
    _, schedule = compiled
    report = str(tmp_path / "run.json")
    assert main(["simulate", "--input", schedule, "--r-db", "12", "--output", report]) == 0
    with open(report, encoding="utf-8") as handle:
        data = json.load(handle)
    assert data["r_db"] == 12.0
    assert len(data["nullifier_variances"]) == 4
    assert len(data["output_cov"]) == 6


@pytest.mark.parametrize("fmt,marker", [("ascii", "modes=3"), ("svg", "<svg"), ("json", '"rows": 3')])
def test_layout_formats(compiled, capsys, fmt, marker):
    _, schedule = compiled
    assert main(["layout", "--input", schedule, "--format", fmt]) == 0
    assert marker in capsys.readouterr().out
