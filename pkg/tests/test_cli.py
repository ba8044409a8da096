import json

import pytest
import yaml

from gwf.cli import main
from gwf.experiments import ConfigError, ExperimentConfig, metrics_table, run_experiment


def _cfg(tmp_path, **kw):
    path = tmp_path / "cfg.yaml"
    path.write_text(yaml.safe_dump(kw))
    return str(path)


def test_gscan_reproducible_bytes(tmp_path):
    cfg = _cfg(tmp_path, n_values=[2, 4, 6], u_values=[0, 4, 10])
    assert main(["gscan", "--config", cfg, "--out", str(tmp_path / "a")]) == 0
    assert main(["gscan", "--config", cfg, "--out", str(tmp_path / "b")]) == 0
    for name in ("gscan.csv", "gscan_points.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    ma, mb = (json.loads((tmp_path / d / "manifest.json").read_text()) for d in "ab")
    assert ma["files"] == mb["files"]
    text = (tmp_path / "a" / "gscan.csv").read_bytes()
    assert b"\r" not in text and text.startswith(b"n,u0,u4,u10\n")
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert manifest["config"]["n_values"] == [2, 4, 6] and "numpy" in manifest["versions"]


def test_table1_small(tmp_path):
    cfg = _cfg(tmp_path, n_values=[2, 4, 6, 8], u_values=[1, 10], fit_window=[2, 4, 6, 8], direct_n=8)
    assert main(["table1", "--config", cfg, "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "table1.csv").read_text().splitlines()
    assert rows[0] == "u_over_t,n8_direct,n20_fit,n30_fit,n40_fit"
    vals = [list(map(float, r.split(","))) for r in rows[1:]]
    for row in vals:
        assert row[2] < row[3] < row[4]  # monotone in N
    assert all(a < b for a, b in zip(vals[0][1:], vals[1][1:]))  # monotone in U/t


def test_metrics_experiment(tmp_path):
    assert main(["metrics", "--out", str(tmp_path), "--connectivity", "linear"]) == 0
    data = json.loads((tmp_path / "metrics.json").read_text())
    assert data["sizes"]["10"]["projection"]["cnot_count"] == 780
    assert data["sizes"]["10"]["projection"]["cnot_depth"] == 132
    assert all(v["matches_closed_forms"] for v in data["sizes"].values())
    a2a = metrics_table([4], "all_to_all")
    assert a2a["4"]["projection"]["cnot_count"] == 4 * 12


@pytest.mark.parametrize("args", [
    ["table1", "--seed", "-3"],
    ["fig1a", "--config", "/does/not/exist.yaml"],
    ["nonsense"],
])
def test_config_errors_exit_2(args, tmp_path):
    assert _run(args + ["--out", str(tmp_path)]) == 2


@pytest.mark.parametrize("bad", [
    {"n_values": [3]}, {"u_values": [-1]}, {"n_values": [16]}, {"bogus": 1}, {"experiment": "table2"},
    {"fit_window": [2, 4]},
])
def test_bad_configs(tmp_path, bad):
    assert _run(["table1", "--config", _cfg(tmp_path, **bad), "--out", str(tmp_path / "o")]) == 2


def test_allow_large_gate():
    with pytest.raises(ConfigError):
        ExperimentConfig.for_experiment("table1", n_values=[14])
    assert ExperimentConfig.for_experiment("table1", n_values=[14], allow_large=True).n_values == [14]
    with pytest.raises(ConfigError):
        ExperimentConfig.for_experiment("table1", n_values=[16], allow_large=True)


def test_numerical_failure_exit_3(tmp_path, monkeypatch):
    from gwf import experiments
    from gwf.exact import ConvergenceError

    def boom(*a, **k):
        raise ConvergenceError("no luck", None)
    monkeypatch.setattr(experiments, "ground_state", boom)
    cfg = _cfg(tmp_path, n_values=[2, 4, 6], hf_restarts=2)
    assert main(["fig1b", "--config", cfg, "--out", str(tmp_path)]) == 3


def test_fig1b_small(tmp_path):
    cfg = ExperimentConfig.for_experiment("fig1b", n_values=[2, 4, 6, 8], fit_window=[2, 4, 6, 8],
                                          hf_restarts=5, out_dir=str(tmp_path))
    files = run_experiment(cfg)
    assert {p.name for p in files} >= {"fig1b.csv", "fig1b_fits.json", "fig1b.gp", "manifest.json"}
    fits = json.loads((tmp_path / "fig1b_fits.json").read_text())
    assert fits["f_gwf"]["c2"] < fits["f_psi0"]["c2"]
    assert "plot" in (tmp_path / "fig1b.gp").read_text()


def _run(args):
    try:
        return main(args)
    except SystemExit as exc:
        return exc.code
