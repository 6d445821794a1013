"""Command-line driver behavior: exit codes, artifact layout, config
parsing, determinism of outputs, and the JSON error channel.

All invocations go through ``cli.main`` in process, so the tests see the
same code path as ``python -m ppwalk.cli`` without subprocess overhead.
"""

import json
import os

import pytest

from ppwalk import cli


def read(path):
    with open(path) as fh:
        return fh.read()


def strip_ts(text):
    return "\n".join(l for l in text.splitlines() if '"timestamp"' not in l)


def write_ini(path, text):
    with open(path, "w") as fh:
        fh.write(text)
    return str(path)


def test_clt1d_defaults(tmp_path, capsys):
    code = cli.main(["clt1d", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("PASS") == 2
    assert "FAIL" not in out
    summary = json.loads(read(tmp_path / "clt1d.json"))
    assert summary["command"] == "clt1d"
    assert summary["passed"] is True
    assert summary["results"]["ks_p_value"] > 0.01
    assert abs(summary["results"]["variance_ratio"] - 1.0) < 0.1
    lines = read(tmp_path / "clt1d.csv").splitlines()
    assert lines[0] == "metric,value,threshold,passed"


def test_bad_environment_exits_2_without_artifacts(tmp_path, capsys):
    cfg = write_ini(tmp_path / "bad.ini",
                    "[environment]\nkind = nosuch\ndimension = 2\nseed = 1\n")
    out_dir = tmp_path / "out"
    code = cli.main(["lln", "--config", cfg, "--out", str(out_dir)])
    captured = capsys.readouterr()
    assert code == 2
    err = json.loads(captured.err.strip().splitlines()[-1])
    assert err["error"] == "ConfigError"
    assert not out_dir.exists()


def test_unknown_experiment_key_exits_2(tmp_path, capsys):
    cfg = write_ini(tmp_path / "bad.ini", "[experiment]\nbogus = 3\n")
    assert cli.main(["expsum", "--config", cfg, "--out", str(tmp_path)]) == 2
    capsys.readouterr()


def test_walk_section_rejected_for_walkless_command(tmp_path, capsys):
    cfg = write_ini(tmp_path / "bad.ini", "[walk]\nsteps = 10\n")
    assert cli.main(["entropy", "--config", cfg, "--out", str(tmp_path)]) == 2
    err = json.loads(capsys.readouterr().err.strip())
    assert "walk" in err["message"]


def test_unknown_section_exits_2(tmp_path, capsys):
    cfg = write_ini(tmp_path / "bad.ini", "[misc]\nx = 1\n")
    assert cli.main(["lln", "--config", cfg, "--out", str(tmp_path)]) == 2
    capsys.readouterr()


def test_rerun_is_deterministic_minus_timestamp(tmp_path, capsys):
    cfg = write_ini(tmp_path / "exp.ini",
                    "[walk]\nsteps = 2000\nreplicas = 400\n")
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert cli.main(["lln", "--config", cfg, "--out", str(out)]) == 0
    capsys.readouterr()
    assert read(a / "lln.csv") == read(b / "lln.csv")
    assert strip_ts(read(a / "lln.json")) == strip_ts(read(b / "lln.json"))
    assert read(a / "lln.json") != ""


def test_threads_do_not_change_results(tmp_path, capsys):
    cfg = write_ini(tmp_path / "exp.ini",
                    "[walk]\nsteps = 2000\nreplicas = 400\n")
    a, b = tmp_path / "t1", tmp_path / "t4"
    assert cli.main(["lln", "--config", cfg, "--out", str(a),
                     "--threads", "1"]) == 0
    assert cli.main(["lln", "--config", cfg, "--out", str(b),
                     "--threads", "4"]) == 0
    capsys.readouterr()
    assert read(a / "lln.csv") == read(b / "lln.csv")


def test_expsum_d1_fails_honestly(tmp_path, capsys):
    cfg = write_ini(tmp_path / "d1.ini",
                    "[environment]\nkind = full\ndimension = 1\nseed = 0\n")
    code = cli.main(["expsum", "--config", cfg, "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 1
    assert "FAIL scaled_sum_stable" in out
    summary = json.loads(read(tmp_path / "expsum.json"))
    assert summary["passed"] is False
    assert abs(summary["results"]["ratio_last_first"] - 2.0178) < 0.01


def test_expsum_default_d2_passes(tmp_path, capsys):
    assert cli.main(["expsum", "--out", str(tmp_path)]) == 0
    capsys.readouterr()
    lines = read(tmp_path / "expsum.csv").splitlines()
    assert lines[0] == "a,sum,product"
    assert len(lines) == 1 + 11


def test_simulate_artifacts_and_seed_override(tmp_path, capsys):
    cfg = write_ini(tmp_path / "sim.ini", "[walk]\nsteps = 50\nreplicas = 3\n")
    code = cli.main(["simulate", "--config", cfg, "--seed", "9",
                     "--out", str(tmp_path)])
    capsys.readouterr()
    assert code == 0
    names = sorted(n for n in os.listdir(tmp_path) if n.startswith("walk_r"))
    assert names == ["walk_r0000.csv", "walk_r0001.csv", "walk_r0002.csv"]
    body = read(tmp_path / "walk_r0000.csv").splitlines()
    assert body[1] == "step,x_1,x_2"
    assert len(body) == 2 + 51
    summary = json.loads(read(tmp_path / "simulate.json"))
    assert summary["seeds"] == {"environment": 9, "walk_rng": 9}


def test_config_echo_round_trips(tmp_path, capsys):
    cfg = write_ini(tmp_path / "sim.ini", "[walk]\nsteps = 20\nreplicas = 2\n")
    assert cli.main(["simulate", "--config", cfg, "--seed", "0x2a",
                     "--out", str(tmp_path)]) == 0
    echo = json.loads(read(tmp_path / "simulate.json"))["config"]["environment"]
    assert echo["seed"] == 42
    lines = "".join(f"{k} = {v}\n" for k, v in echo.items())
    cfg2 = write_ini(tmp_path / "echo.ini",
                     "[environment]\n" + lines
                     + "[walk]\nsteps = 500\nreplicas = 200\n")
    out2 = tmp_path / "second"
    assert cli.main(["lln", "--config", cfg2, "--out", str(out2)]) == 0
    capsys.readouterr()
    echo2 = json.loads(read(out2 / "lln.json"))["config"]["environment"]
    assert echo2 == echo


def test_recurrence2d_reduced_radius(tmp_path, capsys):
    cfg = write_ini(tmp_path / "rec.ini",
                    "[experiment]\nradius = 150\ncutsets = 100\n")
    assert cli.main(["recurrence2d", "--config", cfg,
                     "--out", str(tmp_path)]) == 0
    capsys.readouterr()
    summary = json.loads(read(tmp_path / "recurrence2d.json"))
    assert summary["results"]["slope_vs_log_n"] > 0
    lines = read(tmp_path / "recurrence2d.csv").splitlines()
    assert lines[0] == "n,C_Pi_n,partial_sum"
    assert len(lines) == 1 + 100


def test_recurrence2d_radius_too_small_exits_2(tmp_path, capsys):
    cfg = write_ini(tmp_path / "rec.ini",
                    "[experiment]\nradius = 50\ncutsets = 100\n")
    assert cli.main(["recurrence2d", "--config", cfg,
                     "--out", str(tmp_path)]) == 2
    capsys.readouterr()


def test_entropy_defaults(tmp_path, capsys):
    assert cli.main(["entropy", "--out", str(tmp_path)]) == 0
    capsys.readouterr()
    lines = read(tmp_path / "entropy.csv").splitlines()
    assert lines[0] == "n,p_n_00,M,Q,S"
    assert len(lines) == 62


def test_isoperimetry_reduced_samples(tmp_path, capsys):
    cfg = write_ini(tmp_path / "iso.ini", "[experiment]\nsamples = 300\n")
    assert cli.main(["isoperimetry", "--config", cfg,
                     "--out", str(tmp_path)]) == 0
    capsys.readouterr()
    summary = json.loads(read(tmp_path / "isoperimetry.json"))
    assert summary["passed"] is True
    assert summary["checks"]["energy_never_grows"] is True


def test_out_dir_falls_back_to_env_var(tmp_path, capsys, monkeypatch):
    target = tmp_path / "from_env"
    monkeypatch.setenv("PPWALK_OUT", str(target))
    cfg = write_ini(tmp_path / "exp.ini",
                    "[walk]\nsteps = 200\nreplicas = 50\n")
    assert cli.main(["lln", "--config", cfg]) == 0
    capsys.readouterr()
    assert (target / "lln.json").exists()
