import json

import numpy as np
import pytest

from hubbardll.cli import main
from hubbardll.config import RunConfig, parse_config_text
from hubbardll.errors import ConfigError


def write_config(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


BASE = """
model.lambda = 0.01
model.v0 = 1.0
model.v2pf = 1.0
model.mu = 0.5
model.gamma = 2.0
"""


def test_parse_config_roundtrip():
    raw = parse_config_text("a.b = 1.5 # comment\n\n# full comment\nc.d = x,y\n")
    assert raw == {"a.b": "1.5", "c.d": "x,y"}


def test_parse_config_malformed_key():
    with pytest.raises(ConfigError) as err:
        parse_config_text("model lambda = 3\n")
    assert "model lambda" in str(err.value)


def test_config_typed_getters():
    cfg = RunConfig({"x.f": "2.5e-3", "x.i": "42", "x.list": "1,2,3"})
    assert cfg.get_float("x.f") == 2.5e-3
    assert cfg.get_int("x.i") == 42
    assert cfg.get_floats("x.list") == [1.0, 2.0, 3.0]
    assert cfg.get_float("missing", 7.0) == 7.0
    with pytest.raises(ConfigError) as err:
        cfg.require_float("x.missing")
    assert "x.missing" in str(err.value)
    with pytest.raises(ConfigError) as err:
        RunConfig({"x.f": "abc"}).get_float("x.f")
    assert "x.f" in str(err.value)


def test_cmd_flow_row_count(tmp_path):
    cfg = write_config(tmp_path, BASE + "flow.h_min = -10000\n")
    out = tmp_path / "out"
    assert main(["flow", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "flow.csv").read_text().splitlines()
    assert len(lines) == 10002  # header + 10001 scales
    manifest = json.loads((out / "manifest.json").read_text())
    assert {e["file"] for e in manifest["outputs"]} == {"flow.csv"}


def test_cmd_flow_zero_coupling(tmp_path):
    cfg = write_config(tmp_path, BASE.replace("0.01", "0.0") + "flow.h_min = -50\n")
    out = tmp_path / "out"
    assert main(["flow", "--config", cfg, "--out", str(out)]) == 0
    rows = (out / "flow.csv").read_text().splitlines()
    header = rows[0].split(",")
    idx = {name: i for i, name in enumerate(header)}
    for row in rows[1:]:
        cells = row.split(",")
        for col in ("re_g1", "re_g2", "re_g4", "re_delta", "re_nu"):
            assert float(cells[idx[col]]) == 0.0


def test_cmd_flow_outside_sector_exits_2(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        BASE.replace("0.01", "0.05")
        + "flow.h_min = -100\nsector.epsilon = 0.01\nsector.delta = 0.785\n",
    )
    out = tmp_path / "out"
    assert main(["flow", "--config", cfg, "--out", str(out)]) == 2
    err = capsys.readouterr().err
    assert "sector" in err
    assert not (out / "manifest.json").exists()


def test_cmd_exponents_grid(tmp_path):
    grid = ",".join(str(x) for x in np.linspace(1e-4, 0.05, 50))
    cfg = write_config(tmp_path, BASE + f"model.lambda_grid = {grid}\n")
    out = tmp_path / "out"
    assert main(["exponents", "--config", cfg, "--out", str(out)]) == 0
    records = json.loads((out / "exponents.json").read_text())
    assert len(records) == 50
    for rec in records:
        for val in rec["residuals"].values():
            assert abs(val) <= 1e-12


def test_cmd_exponents_zero_coupling(tmp_path):
    cfg = write_config(tmp_path, BASE.replace("0.01", "0.0"))
    out = tmp_path / "out"
    assert main(["exponents", "--config", cfg, "--out", str(out)]) == 0
    rec = json.loads((out / "exponents.json").read_text())[0]
    assert rec["K"] == 1.0 and rec["K_bar"] == 1.0 and rec["eta_rho"] == 0.0


def test_cmd_correlations(tmp_path):
    cfg = write_config(tmp_path, BASE + "correlations.x_max = 20\n")
    out = tmp_path / "out"
    assert main(["correlations", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "correlations.csv").read_text().splitlines()
    assert lines[0] == "channel,x0,x1,value"
    assert len(lines) == 1 + 20 * 5  # C,S,SC,TC,S2 per x
    assert (out / "spin_charge.csv").exists()


def test_cmd_baseline_small(tmp_path):
    cfg = write_config(
        tmp_path,
        BASE
        + "lattice.L = 64\nlattice.beta = 64.0\nlattice.M = 12\n"
        + "baseline.x_max = 12\nbaseline.ward_m_levels = 8,10,12\n"
        + "baseline.propagator_M = 1000000\n",
    )
    out = tmp_path / "out"
    assert main(["baseline", "--config", cfg, "--out", str(out)]) == 0
    for name in ("propagator.csv", "response.csv", "ward.csv", "susceptibility.csv"):
        assert (out / name).exists()
    ward = (out / "ward.csv").read_text().splitlines()
    rels = [float(r.split(",")[-1]) for r in ward[1:]]
    assert rels[-1] < rels[0]  # residual decreases under M refinement


def test_cmd_baseline_default_lattice_budget(tmp_path):
    # the default L = beta = 256 baseline must stay well under a minute
    import time

    cfg = write_config(tmp_path, BASE)
    out = tmp_path / "out"
    t0 = time.time()
    assert main(["baseline", "--config", cfg, "--out", str(out)]) == 0
    assert time.time() - t0 < 60.0


def test_cmd_sweep_deterministic(tmp_path):
    grid = ",".join(str(x) for x in np.linspace(1e-4, 0.02, 12))
    cfg = write_config(tmp_path, BASE + f"model.lambda_grid = {grid}\n")
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["sweep", "--config", cfg, "--out", str(out1), "--threads", "4"]) == 0
    assert main(["sweep", "--config", cfg, "--out", str(out2), "--threads", "1"]) == 0
    b1 = (out1 / "sweep.csv").read_bytes()
    b2 = (out2 / "sweep.csv").read_bytes()
    assert b1 == b2
    m1 = json.loads((out1 / "manifest.json").read_text())
    m2 = json.loads((out2 / "manifest.json").read_text())
    assert m1["outputs"] == m2["outputs"]  # identical checksums


def test_interrupted_sweep_leaves_no_manifest(tmp_path):
    # the second grid point is deep in the strong-coupling region and fails
    cfg = write_config(tmp_path, BASE + "model.lambda_grid = 0.01,5.0\n")
    out = tmp_path / "out"
    assert main(["sweep", "--config", cfg, "--out", str(out)]) == 2
    assert not (out / "manifest.json").exists()


def test_missing_required_key_exits_2(tmp_path, capsys):
    cfg = write_config(tmp_path, "model.mu = 0.5\n")
    assert main(["exponents", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
    assert "model.lambda" in capsys.readouterr().err


def test_manifest_checksums_reproducible(tmp_path):
    cfg = write_config(tmp_path, BASE + "flow.h_min = -200\n")
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["flow", "--config", cfg, "--out", str(out)]) == 0
        outs.append(json.loads((out / "manifest.json").read_text())["outputs"])
    assert outs[0] == outs[1]


def test_randomized_schedule_uses_seed(tmp_path):
    cfg = write_config(tmp_path, BASE + "flow.h_min = -500\nflow.sigma_c0 = 0.5\n")
    outs = []
    for name, seed in (("a", "1"), ("b", "1"), ("c", "2")):
        out = tmp_path / name
        assert main(["flow", "--config", cfg, "--out", str(out),
                     "--seed", seed]) == 0
        outs.append((out / "flow.csv").read_bytes())
    assert outs[0] == outs[1]
    assert outs[0] != outs[2]
