import json
import math

import numpy as np
import pytest

from maxstable.cli import main


def run_cli(args):
    return main([str(a) for a in args])


def write_config(tmp_path, name, cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def test_gallery_list(capsys):
    assert run_cli(["gallery", "list"]) == 0
    out = capsys.readouterr().out
    for name in ("extremal_process", "moving_maxima", "brown_resnick"):
        assert name in out


def test_simulate_extremal_monotone_paths(tmp_path):
    cfg = write_config(tmp_path, "sim.json", {
        "representation": {"gallery": "extremal_process", "params": {"alpha": 1.0, "horizon": 5.0}},
        "grid": {"start": 0.1, "stop": 5.0, "num": 25},
        "n_paths": 200,
    })
    out = tmp_path / "artifacts"
    assert run_cli(["simulate", "--config", cfg, "--seed", 42, "--out", out]) == 0
    lines = (out / "paths.csv").read_text().strip().split("\n")
    assert lines[0] == "path_id,t,value"
    assert len(lines) == 1 + 200 * 25
    values = np.array([float(l.split(",")[2]) for l in lines[1:]]).reshape(200, 25)
    assert np.all(np.diff(values, axis=1) >= 0)
    doc = read_json(out / "ensemble.json")
    assert doc["seed"] == 42
    assert doc["library"]["name"] == "maxstable"
    assert "config_sha256" in doc


def test_verify_fdd_extremal(tmp_path, capsys):
    cfg = write_config(tmp_path, "verify.json", {
        "representation": {"gallery": "extremal_process", "params": {"alpha": 1.0, "horizon": 5.0}},
        "probes": [[[1.0, 1.0], [2.0, 2.0]]],
        "n_paths": 20000,
    })
    out = tmp_path / "v"
    assert run_cli(["verify-fdd", "--config", cfg, "--seed", 7, "--out", out]) == 0
    doc = read_json(out / "report.json")
    assert doc["all_pass"] is True
    probe = doc["probes"][0]
    assert probe["p_model"] == pytest.approx(math.exp(-1.5), abs=2e-3)
    assert abs(probe["p_empirical"] - probe["p_model"]) <= probe["band"]
    assert "pass" in capsys.readouterr().out


def test_classify_gaussian_moving_maxima(tmp_path):
    cfg = write_config(tmp_path, "cls.json", {
        "representation": {"gallery": "gaussian_moving_maxima",
                           "params": {"t_range": [-3.0, 3.0], "n_points": 257}},
        "positive_null": True,
    })
    out = tmp_path / "c"
    assert run_cli(["classify", "--config", cfg, "--out", out]) == 0
    doc = read_json(out / "report.json")
    assert doc["hopf"]["aggregate"] == "dissipative"
    assert doc["hopf"]["masses"]["conservative"] == 0.0
    assert doc["positive_null"]["aggregate"] == "null"


def test_reduce_from_file(tmp_path):
    rep_doc = {"type": "atomic", "alpha": 1.0, "times": [0.0, 1.0],
               "atoms": {"masses": [1.0, 1.0],
                         "values": [[1.0, 3.0], [2.0, 6.0]]}}
    rep_path = tmp_path / "rep.json"
    rep_path.write_text(json.dumps(rep_doc))
    cfg = write_config(tmp_path, "red.json",
                       {"representation": {"file": str(rep_path)}})
    out = tmp_path / "r"
    assert run_cli(["reduce", "--config", cfg, "--out", out]) == 0
    doc = read_json(out / "report.json")
    assert doc["n_atoms"] == {"before": 2, "after": 1}
    assert doc["certificate"]["minimal"] is False
    reduced = read_json(out / "reduced_rep.json")
    assert reduced["atoms"]["masses"] == [4.0]


def test_br_test_subcommand(tmp_path):
    cfg = write_config(tmp_path, "br.json", {
        "model": {"hurst": 0.5, "sigma": 1.0},
        "windows": [10.0, 100.0, 1000.0],
        "n_paths": 60,
    })
    out = tmp_path / "b"
    assert run_cli(["br-test", "--config", cfg, "--seed", 3, "--out", out]) == 0
    doc = read_json(out / "report.json")
    assert doc["verdict"] == "convergent"
    assert doc["tail_bound"]["max"] < math.inf


def test_rerun_byte_identical_and_worker_independent(tmp_path):
    cfg = write_config(tmp_path, "sim.json", {
        "representation": {"gallery": "extremal_process", "params": {"alpha": 2.0, "horizon": 3.0}},
        "grid": [0.5, 1.0, 2.0],
        "n_paths": 300,
    })
    outputs = []
    for i, workers in enumerate((1, 8, 1)):
        out = tmp_path / f"run{i}"
        assert run_cli(["simulate", "--config", cfg, "--seed", 5, "--out", out,
                        "--workers", workers]) == 0
        outputs.append(((out / "paths.csv").read_bytes(), (out / "ensemble.json").read_bytes()))
    assert outputs[0][0] == outputs[1][0] == outputs[2][0]
    assert outputs[0][1] == outputs[1][1] == outputs[2][1]


def test_cli_flag_overrides_config(tmp_path):
    cfg = write_config(tmp_path, "sim.json", {
        "representation": {"gallery": "extremal_process"},
        "grid": [1.0, 2.0],
        "n_paths": 10,
        "seed": 1,
    })
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run_cli(["simulate", "--config", cfg, "--out", out1]) == 0
    assert run_cli(["simulate", "--config", cfg, "--seed", 2, "--out", out2]) == 0
    assert read_json(out1 / "ensemble.json")["seed"] == 1
    assert read_json(out2 / "ensemble.json")["seed"] == 2
    assert (out1 / "paths.csv").read_bytes() != (out2 / "paths.csv").read_bytes()


def test_validation_error_exit_code_and_stderr_json(tmp_path, capsys):
    cfg = write_config(tmp_path, "bad.json", {"grid": [1.0]})
    assert run_cli(["simulate", "--config", cfg, "--out", tmp_path / "x"]) == 1
    err = capsys.readouterr().err
    doc = json.loads(err)
    assert "representation" in doc["error"]["message"]


def test_numeric_error_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, "num.json", {
        "representation": {"gallery": "moving_maxima",
                           "params": {"kernel": {"family": "gaussian"},
                                      "t_range": [0.0, 1.0]}},
        "grid": [0.0, 0.5],
        "n_paths": 5,
        "max_terms": 1,
    })
    assert run_cli(["simulate", "--config", cfg, "--out", tmp_path / "y"]) == 2
    doc = json.loads(capsys.readouterr().err)
    assert doc["error"]["type"] == "numeric"
