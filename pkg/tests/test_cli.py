"""CLI surface: subcommands, schemas, config merging, exit codes."""

import json
import os

import numpy as np
import pytest

from bregvar.cli import dumps_json, main, read_path_csv


def run_cli(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


MODEL_JD = '{"sigma2":1.0,"jumps":{"type":"cp","intensity":2.0,"law":"two_point","a":1.0}}'


class TestJsonFormatting:
    def test_seventeen_digits_round_trip(self):
        x = 0.1 + 0.2
        text = dumps_json({"v": x})
        assert json.loads(text)["v"] == x

    def test_nan_becomes_null(self):
        assert dumps_json({"v": float("nan")}) == '{"v": null}'


class TestYoung:
    def test_info_json_schema(self, capsys):
        rc, out, _ = run_cli(capsys, "young", "info", "--family", "power", "--p", "2.0", "--json")
        assert rc == 0
        payload = json.loads(out)
        assert set(payload) == {"k_phi", "d_phi", "D_phi", "c_phi", "exact"}
        assert payload["k_phi"] == 4.0
        assert payload["c_phi"] == 4.0
        assert payload["exact"] is True

    def test_info_human(self, capsys):
        rc, out, _ = run_cli(capsys, "young", "info", "--family", "plog", "--p", "2.0", "--gamma", "1.0")
        assert rc == 0
        assert "k_phi" in out

    def test_bad_family_params(self, capsys):
        rc, _, err = run_cli(capsys, "young", "info", "--family", "power", "--p", "1.0")
        assert rc == 2


class TestSimulateVariationRoundTrip:
    def test_csv_round_trip_and_routes(self, capsys, tmp_path):
        path_csv = tmp_path / "path.csv"
        rc, out, _ = run_cli(
            capsys, "simulate", "--model", MODEL_JD, "--T", "1", "--M", "64", "--seed", "7",
            "--out", str(path_csv),
        )
        assert rc == 0
        head = path_csv.read_text().splitlines()
        assert head[0] == "# schema: bregvar/path-v1"
        assert "t,x,is_jump,x_left" in head[:6]

        from bregvar.paths import LevyModel, CompoundPoisson, TwoPointLaw, simulate

        ref = simulate(
            LevyModel(1.0, CompoundPoisson(2.0, TwoPointLaw(1.0))), 1.0, 64, 7
        )
        back = read_path_csv(str(path_csv))
        assert np.array_equal(back.times, ref.times)
        assert np.array_equal(back.values, ref.values)
        assert back.qv_cont_rate == 1.0

        trace_csv = tmp_path / "tr.csv"
        rc, out, _ = run_cli(
            capsys, "variation", "--phi", "power:2", "--in", str(path_csv), "--route", "pathwise",
            "--out", str(trace_csv),
        )
        assert rc == 0
        rows = [l for l in trace_csv.read_text().splitlines() if not l.startswith("#") and not l.startswith("t,")]
        data = np.array([[float(v) for v in r.split(",")] for r in rows])
        from bregvar.convex import young_builtin
        from bregvar.variation import pathwise_variation

        tr = pathwise_variation(young_builtin("power", p=2), ref)
        assert np.allclose(data[:, 1], tr.v, rtol=0, atol=0)

        for route in ("definition", "discrete"):
            rc, _, _ = run_cli(
                capsys, "variation", "--phi", "power:2", "--in", str(path_csv), "--route", route,
                "--out", str(tmp_path / f"{route}.csv"),
            )
            assert rc == 0


class TestOrlicz:
    def test_norm_twelve_digits(self, capsys, tmp_path):
        data = tmp_path / "d.csv"
        data.write_text("value,weight\n3.0,0.5\n4.0,0.5\n")
        rc, out, _ = run_cli(capsys, "orlicz", "norm", "--phi", "power:2", "--data", str(data))
        assert rc == 0
        assert out.strip() == "3.53553390593"


class TestIsometry:
    def test_enumerate_walk_21(self, capsys):
        rc, out, _ = run_cli(
            capsys, "isometry", "--mode", "enumerate", "--phi", "power:4", "--depth", "3", "--json"
        )
        assert rc == 0
        payload = json.loads(out)
        assert set(payload) == {"schema_version", "lhs", "rhs", "abs_err", "rel_err", "stderr", "grid_allowance", "verdict"}
        assert payload["lhs"] == 21.0 and payload["rhs"] == 21.0
        assert payload["verdict"] == "pass"

    def test_mc_small(self, capsys):
        rc, out, _ = run_cli(
            capsys, "isometry", "--mode", "mc", "--phi", "power:2", "--model", '{"sigma2":1.0}',
            "--N", "500", "--seed", "3", "--json",
        )
        assert rc == 0
        assert json.loads(out)["verdict"] == "pass"

    def test_mc_deterministic_json(self, capsys):
        args = ("isometry", "--mode", "mc", "--phi", "power:2", "--model", '{"sigma2":1.0}', "--N", "400", "--seed", "9", "--json")
        rc1, out1, _ = run_cli(capsys, *args)
        rc2, out2, _ = run_cli(capsys, *args)
        assert out1 == out2

    def test_stopped(self, capsys):
        rc, out, _ = run_cli(
            capsys, "isometry", "--mode", "stopped", "--phi", "power:2", "--model", '{"sigma2":1.0}',
            "--interval=-1,1", "--t-cap", "4", "--N", "300", "--grid-m", "256", "--seed", "5", "--json",
        )
        assert rc == 0
        assert json.loads(out)["verdict"] == "pass"

    def test_missing_model_usage_error(self, capsys):
        rc, _, _ = run_cli(capsys, "isometry", "--mode", "mc", "--phi", "power:2")
        assert rc == 2


class TestSemigroupAndHardyStein:
    def test_density_csv(self, capsys, tmp_path):
        out_csv = tmp_path / "p.csv"
        rc, out, _ = run_cli(
            capsys, "semigroup", "density", "--symbol", '{"sigma2":2.0}', "--t", "1.0",
            "--L", "40", "--m", "10", "--out", str(out_csv),
        )
        assert rc == 0
        rows = [l for l in out_csv.read_text().splitlines() if not l.startswith(("#", "x,"))]
        data = np.array([[float(v) for v in r.split(",")] for r in rows])
        dx = data[1, 0] - data[0, 0]
        assert np.sum(data[:, 1]) * dx == pytest.approx(1.0, abs=1e-8)

    def test_density_hw_failure_exit_3(self, capsys, tmp_path):
        rc, _, err = run_cli(
            capsys, "semigroup", "density", "--symbol",
            '{"sigma2":0.0,"jumps":{"type":"cp","intensity":2.0,"law":"two_point","a":1.0}}',
            "--t", "1.0", "--out", str(tmp_path / "p.csv"),
        )
        assert rc == 3

    def test_parabolic_json(self, capsys):
        rc, out, _ = run_cli(
            capsys, "hardy-stein", "parabolic", "--symbol", '{"sigma2":2.0}', "--phi", "power:3",
            "--f", "gaussian:1.0", "--T", "8", "--K", "10", "--m", "11", "--json",
        )
        assert rc == 0
        payload = json.loads(out)
        assert payload["verdict"] == "pass"
        assert payload["accounting_rel"] < 1e-6

    def test_parabolic_check_failure_exit_1(self, capsys):
        rc, out, _ = run_cli(
            capsys, "hardy-stein", "parabolic", "--symbol", '{"sigma2":2.0}', "--phi", "power:2",
            "--T", "4", "--K", "8", "--m", "10", "--quad-tol", "1e-20", "--json",
        )
        assert rc == 1

    def test_elliptic_json(self, capsys):
        rc, out, _ = run_cli(
            capsys, "hardy-stein", "elliptic", "--phi", "power:2", "--interval", "0,1", "--x", "0.5", "--json"
        )
        assert rc == 0
        payload = json.loads(out)
        assert payload["lhs"] == 0.5 and payload["verdict"] == "pass"


class TestConfigAndSeeds:
    def test_config_flags_win(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.toml"
        cfg.write_text('T = 2.0\nM = 16\nseed = 5\n')
        out_csv = tmp_path / "p.csv"
        rc, _, _ = run_cli(
            capsys, "simulate", "--config", str(cfg), "--model", '{"sigma2":1.0}', "--M", "8",
            "--out", str(out_csv),
        )
        assert rc == 0
        p = read_path_csv(str(out_csv))
        assert p.grid_m == 8  # flag beats config
        assert p.horizon == 2.0  # config fills the gap

    def test_unknown_config_key_exit_2(self, capsys, tmp_path):
        cfg = tmp_path / "bad.toml"
        cfg.write_text("bogus = 1\n")
        rc, _, err = run_cli(capsys, "simulate", "--config", str(cfg), "--model", '{"sigma2":1.0}', "--out", "x.csv")
        assert rc == 2
        assert "bogus" in err

    def test_env_seed_fallback(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("BREGVAR_SEED", "123")
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(capsys, "simulate", "--model", '{"sigma2":1.0}', "--M", "8", "--out", str(out1))
        run_cli(capsys, "simulate", "--model", '{"sigma2":1.0}', "--M", "8", "--out", str(out2))
        assert out1.read_text() == out2.read_text()
        monkeypatch.setenv("BREGVAR_SEED", "124")
        out3 = tmp_path / "c.csv"
        run_cli(capsys, "simulate", "--model", '{"sigma2":1.0}', "--M", "8", "--out", str(out3))
        assert out1.read_text() != out3.read_text()

    def test_empty_required_listing(self, capsys):
        rc, _, _ = run_cli(capsys, "simulate")
        assert rc == 2


class TestSumIndepDoob:
    def test_sum_indep_json(self, capsys):
        rc, out, _ = run_cli(
            capsys, "sum-indep", "--phi", "power:2", "--model-x", '{"sigma2":1.0}',
            "--model-y", MODEL_JD, "--N", "400", "--grid-m", "16", "--seed", "3", "--json",
        )
        assert rc == 0
        assert json.loads(out)["verdict"] == "pass"

    def test_doob_json(self, capsys):
        rc, out, _ = run_cli(
            capsys, "doob", "--phi", "power:2", "--model", '{"sigma2":1.0}', "--N", "500",
            "--grid-m", "16", "--seed", "3", "--json",
        )
        assert rc == 0
        assert json.loads(out)["verdict"] == "pass"
