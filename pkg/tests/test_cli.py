import json
import os

import pytest

from coarse_menger.cli import (
    EXIT_CAPACITY,
    EXIT_CONFIG,
    EXIT_OK,
    main,
)
from coarse_menger.generators import grid, grid_column
from coarse_menger.graph import to_json_dict


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_version_flag(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0


def test_missing_subcommand_is_config_error(capsys):
    assert run(capsys, )[0] == EXIT_CONFIG


def test_unknown_flag_is_config_error(capsys):
    assert run(capsys, "run-duality", "--frobnicate")[0] == EXIT_CONFIG


def test_run_duality_grid(capsys):
    code, out, _ = run(capsys, "run-duality", "--grid", "3x4",
                       "--r", "1,2", "--beta", "0,1")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["violations"] == []
    inst = doc["instances"][0]
    assert inst["packing"]["1"]["value"] == 3


def test_run_duality_bad_grid(capsys):
    assert run(capsys, "run-duality", "--grid", "3by4")[0] == EXIT_CONFIG


def test_run_duality_bad_threshold_list(capsys):
    assert run(capsys, "run-duality", "--grid", "2x2",
               "--r", "1,,x")[0] == EXIT_CONFIG


def test_run_duality_missing_file(capsys):
    assert run(capsys, "run-duality", "--file", "/nonexistent.json")[0] == \
        EXIT_CONFIG


def test_run_duality_file_instances(tmp_path, capsys):
    g = grid(2, 3)
    doc = [{"graph": to_json_dict(g),
            "x": sorted(grid_column(2, 3, 0)),
            "y": sorted(grid_column(2, 3, 2)),
            "label": "tiny"}]
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "run-duality", "--file", str(path),
                       "--r", "1", "--beta", "0")
    assert code == EXIT_OK
    parsed = json.loads(out)
    assert parsed["instances"][0]["label"] == "tiny"


def test_run_duality_output_files(tmp_path, capsys):
    out_path = tmp_path / "report"
    code, _, _ = run(capsys, "run-duality", "--grid", "2x3",
                     "--out", str(out_path))
    assert code == EXIT_OK
    assert (tmp_path / "report.json").exists()
    csv = (tmp_path / "report.csv").read_text()
    assert csv.splitlines()[0] == "fingerprint,kind,threshold,value,exact,flag"


def test_run_duality_deterministic_modulo_timestamp(capsys):
    _, out1, _ = run(capsys, "run-duality", "--seed", "3", "--count", "3")
    _, out2, _ = run(capsys, "run-duality", "--seed", "3", "--count", "3")
    d1, d2 = json.loads(out1), json.loads(out2)
    d1.pop("timestamp"), d2.pop("timestamp")
    assert d1 == d2


def test_run_duality_jobs_agree_with_serial(capsys):
    _, out1, _ = run(capsys, "run-duality", "--seed", "5", "--count", "4",
                     "--jobs", "1")
    _, out2, _ = run(capsys, "run-duality", "--seed", "5", "--count", "4",
                     "--jobs", "3")
    d1, d2 = json.loads(out1), json.loads(out2)
    d1.pop("timestamp"), d2.pop("timestamp")
    d1["config"].pop("jobs"), d2["config"].pop("jobs")
    assert d1 == d2


def test_env_cap_malformed(capsys, monkeypatch):
    monkeypatch.setenv("COARSE_MENGER_CAP", "many")
    assert run(capsys, "gen", "--count", "1")[0] == EXIT_CONFIG


def test_env_cap_is_clamped(capsys, monkeypatch):
    monkeypatch.setenv("COARSE_MENGER_CAP", "999")
    code, out, _ = run(capsys, "gen", "--count", "3", "--seed", "2")
    assert code == EXIT_OK
    for inst in json.loads(out)["instances"]:
        assert len(inst["graph"]["vertices"]) <= 16


def test_run_acceptance_single_criterion(capsys):
    code, out, err = run(capsys, "run-acceptance", "--only", "transfer-pinning")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["passed"] is True
    assert "PASS transfer-pinning" in err


def test_run_acceptance_unknown_criterion(capsys):
    assert run(capsys, "run-acceptance", "--only", "nope")[0] == EXIT_CONFIG


def test_run_transfer_pinned(capsys):
    code, out, _ = run(capsys, "run-transfer", "--m", "1", "--a", "0",
                       "--k", "3", "--r", "2", "--count-bound", "5",
                       "--radius-bound", "7", "--ledger")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["constants"] == {"c1": 4, "c2": 4}
    assert doc["chain"]["f_out"] == 7
    assert doc["c_h_ledger"]["finite_apex"]["coefficient"] == 14


def test_gen_grid_instance(capsys):
    code, out, _ = run(capsys, "gen", "--grid", "2x4")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["instances"][0]["family"] == "menger_lower_bound"


def test_gen_bad_family(capsys):
    assert run(capsys, "gen", "--family", "weird")[0] == EXIT_CONFIG
