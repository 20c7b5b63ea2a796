"""Configuration validation, CLI subcommands, presets, inline expressions."""

import json
import math

import numpy as np
import pytest

from layerscat.cli import (config_from_dict, convergence_sweep, main,
                           preset_config, run)
from layerscat.errors import ConfigError
from layerscat.exprs import parse_expression, surface_from_expression
from layerscat.surface import builtin

BASE = {
    "problem": "dirichlet", "k_plus": 2.7, "k_minus": 3.5,
    "surface": "gamma2",
    "incident": {"type": "plane", "theta_d": 4 * math.pi / 3},
    "N": 8, "eval_points": [[1.0, -0.2]],
}


def test_config_roundtrip():
    cfg = config_from_dict(BASE)
    assert cfg.N == 8
    assert cfg.A == pytest.approx(10 * math.pi)
    assert cfg.eta is None
    assert cfg.digest() == config_from_dict(BASE).digest()


@pytest.mark.parametrize("patch,field", [
    ({"N": 0}, "N"),
    ({"problem": "neumann"}, "problem"),
    ({"k_plus": -1.0}, "k_plus"),
    ({"k_plus": 3.5}, "k_plus/k_minus"),
    ({"incident": {"type": "plane", "theta_d": 0.4}}, "theta_d"),
    ({"incident": {"type": "point"}}, "y0"),
    ({"surface": 42}, "surface"),
    ({"A_over_pi": 0}, "A_over_pi"),
    ({"eval_points": [[1.0]]}, "eval_points"),
    ({"eta": -2.0}, "eta"),
])
def test_config_validation_errors(patch, field):
    raw = dict(BASE)
    raw.update(patch)
    with pytest.raises(ConfigError):
        config_from_dict(raw)


def test_point_source_must_be_below_surface():
    raw = dict(BASE)
    raw["surface"] = "gamma1"
    raw["incident"] = {"type": "point", "y0": [1.0, -0.5]}
    cfg = config_from_dict(raw)
    from layerscat.cli import build_problem
    with pytest.raises(ConfigError):
        build_problem(cfg)


def test_preset_list_and_overrides():
    for name in ("example1-dbvp", "example1-ibvp", "example2-dbvp",
                 "example2-ibvp", "example3-dbvp", "example3-ibvp"):
        cfg = preset_config(name, N=8)
        assert cfg.N == 8
    with pytest.raises(ConfigError):
        preset_config("example9-dbvp")


def test_run_report_example1():
    rep = run(preset_config("example1-dbvp", N=16))
    row = rep.rows[0]
    assert row["rel_error"] <= 2.5e-4 * 1.2    # expected error scale at N = 16
    assert rep.node_count == 20 * 16 + 1
    assert rep.residual_norm <= 1e-10


def test_sweep_single_n_equals_run():
    cfg = preset_config("example2-dbvp", N=8)
    rows = convergence_sweep(cfg, [8])
    rep = run(cfg)
    assert rows[0]["value"] == pytest.approx(rep.rows[0]["total"], abs=1e-13)
    with pytest.raises(ConfigError):
        convergence_sweep(cfg, [16, 8])


def test_cli_solve_and_determinism(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(BASE), encoding="utf-8")
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    assert main(["solve", "--config", str(cfg_path), "--out", str(out1)]) == 0
    assert main(["solve", "--config", str(cfg_path), "--out", str(out2)]) == 0
    capsys.readouterr()
    files1 = sorted(p.name for p in out1.iterdir())
    files2 = sorted(p.name for p in out2.iterdir())
    assert files1 == files2 and files1
    for name in files1:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_cli_config_error_exit_code(tmp_path, capsys):
    bad = dict(BASE)
    bad["N"] = 0
    cfg_path = tmp_path / "bad.json"
    cfg_path.write_text(json.dumps(bad), encoding="utf-8")
    assert main(["solve", "--config", str(cfg_path)]) == 2
    assert main(["solve", "--config", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


def test_cli_numerical_error_exit_code(tmp_path, capsys, monkeypatch):
    from layerscat import cli as cli_mod
    from layerscat.errors import SolverError

    def boom(cfg):
        raise SolverError("synthetic failure")

    monkeypatch.setattr(cli_mod, "run", boom)
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(BASE), encoding="utf-8")
    assert main(["solve", "--config", str(cfg_path)]) == 3
    capsys.readouterr()


def test_cli_presets(capsys):
    assert main(["presets", "list"]) == 0
    out = capsys.readouterr().out.split()
    assert "example1-dbvp" in out and len(out) == 6
    assert main(["presets", "run", "example2-dbvp", "--N", "8"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["N"] == 8
    assert payload["rows"][0]["total"]["re"] != 0


def test_cli_greens(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(BASE), encoding="utf-8")
    assert main(["greens", "--config", str(cfg_path),
                 "--grid", "0:1:2,-0.5:0.5:2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[1] == "x1,x2,re,im"
    assert len(out) == 2 + 4


def test_cli_sweep(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(BASE), encoding="utf-8")
    assert main(["sweep", "--config", str(cfg_path), "--N", "4,8"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["N"] for r in rows] == [4, 8]
    assert math.isnan(rows[0]["diff_prev"])
    assert rows[1]["diff_prev"] > 0


def test_expression_parser_matches_builtin():
    expr = "-1+0.16*sin(0.3*pi*t)"
    surf = surface_from_expression(expr)
    ref = builtin("gamma3")
    s = np.linspace(-9, 9, 301)
    assert np.allclose(surf.f(s), ref.f(s), atol=1e-14)
    assert np.allclose(surf.df(s), ref.df(s), atol=1e-14)
    assert np.allclose(surf.d2f(s), ref.d2f(s), atol=1e-13)


def test_expression_gamma1():
    expr = "-1+0.3*sin(0.7*pi*t)*exp(-0.4*t^2)"
    surf = surface_from_expression(expr)
    ref = builtin("gamma1")
    s = np.linspace(-6, 6, 201)
    assert np.allclose(surf.f(s), ref.f(s), atol=1e-14)
    assert np.allclose(surf.d2f(s), ref.d2f(s), atol=1e-12)


def test_expression_symbolic_derivatives():
    node = parse_expression("(t^2+1)*cos(2*t)")
    d = node.diff()
    s = np.linspace(-2, 2, 101)
    h = 1e-6
    fd = (node(s + h) - node(s - h)) / (2 * h)
    assert np.abs(d(s) - fd).max() < 1e-8


def test_expression_errors():
    with pytest.raises(ConfigError):
        parse_expression("sin(")
    with pytest.raises(ConfigError):
        parse_expression("t + q")
    with pytest.raises(ConfigError):
        parse_expression("t^0.5")
    with pytest.raises(ConfigError):
        surface_from_expression("1+0*t")   # surface above the interface


def test_expression_surface_solvable():
    raw = dict(BASE)
    raw["surface"] = {"expr": "-1+0.1*cos(0.5*t)"}
    raw["N"] = 4
    rep = run(config_from_dict(raw))
    assert rep.rows[0]["total"] is not None


def test_sweep_error_table():
    # convergence-table rows: ascending N, decreasing relative-error column
    cfg = preset_config("example1-dbvp")
    rows = convergence_sweep(cfg, [8, 16])
    assert [r["N"] for r in rows] == [8, 16]
    assert rows[1]["rel_error"] < rows[0]["rel_error"]
    assert rows[0]["rel_error"] <= 5e-3 and rows[1]["rel_error"] <= 1e-3


def test_presets_complete_quickly_at_n8():
    import time
    for name in ("example1-dbvp", "example1-ibvp", "example2-dbvp",
                 "example2-ibvp", "example3-dbvp", "example3-ibvp"):
        t0 = time.perf_counter()
        rep = run(preset_config(name, N=8))
        assert time.perf_counter() - t0 < 60.0
        assert rep.rows and rep.residual_norm <= 1e-10


def test_expression_beta_impedance():
    raw = {
        "problem": "impedance", "k_plus": 2.7, "k_minus": 3.5,
        "surface": "gamma2",
        "incident": {"type": "plane", "theta_d": 4 * math.pi / 3},
        "beta": {"expr": "1+0.2*cos(0.3*t)"},
        "N": 4, "eval_points": [[1.0, -0.2]],
    }
    rep = run(config_from_dict(raw))
    assert rep.residual_norm <= 1e-10
    raw["beta"] = {"expr": "0-1*t^0"}   # Re beta <= 0 rejected
    with pytest.raises(Exception):
        run(config_from_dict(raw))
