import csv
import json

import numpy as np
import pytest

import twoframes.group
from twoframes import cli

TINY = """
[scenario]
duration_s = 1.0

[landmarks]
visible_from_s = [0.0, 0.5, 0.5]
visible_until_s = [1.0, 1.0, 1.0]

[montecarlo]
runs = 3
seed = 11
"""


@pytest.fixture
def tiny(tmp_path):
    p = tmp_path / "tiny.toml"
    p.write_text(TINY)
    return p


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


class TestValidate:
    @pytest.mark.parametrize(
        "scenario,expected",
        [
            ("lever_arm_car", "Abelian / group-affine"),
            ("slammot", "CaseB / group-affine"),
            ("inertial_nav", "NotNatural (gyro bias in frame dynamics)"),
        ],
    )
    def test_builtin(self, tmp_path, capsys, scenario, expected):
        p = tmp_path / "c.toml"
        p.write_text(f'[scenario]\nid = "{scenario}"\n')
        code, out, _ = run(["validate", "--config", p], capsys)
        assert code == cli.EXIT_OK
        assert expected in out and "PASS" in out

    def test_empty_system(self, tmp_path, capsys):
        p = tmp_path / "c.toml"
        p.write_text(
            '[scenario]\nid = "slammot"\n[slammot]\nn_static = 0\nn_moving = 0\n'
            "[landmarks]\npositions_m = []\nvisible_from_s = []\nvisible_until_s = []\n"
        )
        code, _, err = run(["validate", "--config", p], capsys)
        assert code == cli.EXIT_CONFIG and "no outputs" in err

    def test_failed_claim(self, tmp_path, capsys, monkeypatch):
        from twoframes.system import FrameClass

        monkeypatch.setitem(cli.EXPECTED, "lever_arm_car", {FrameClass.CaseC})
        p = tmp_path / "c.toml"
        p.write_text('[scenario]\nid = "lever_arm_car"\n')
        code, out, _ = run(["validate", "--config", p], capsys)
        assert code == cli.EXIT_INVALID and "FAIL" in out


class TestConfigHandling:
    def test_print_config_round_trip(self, tmp_path, capsys):
        code, out, _ = run(["--print-config", "--seed", 42], capsys)
        assert code == 0
        assert "[noise]" in out and "sigma_gyro_rad_s" in out and "seed = 42" in out
        p = tmp_path / "dump.toml"
        p.write_text(out)
        assert cli.load_config(str(p)) == cli.ScenarioConfig(seed=42)

    @pytest.mark.parametrize(
        "text", ["[scenario]\nbogus = 1\n", "not toml at all [", '[montecarlo]\nfilters = ["kf"]\n']
    )
    def test_bad_config(self, tmp_path, capsys, text):
        p = tmp_path / "bad.toml"
        p.write_text(text)
        code, _, err = run(["validate", "--config", p], capsys)
        assert code == cli.EXIT_CONFIG and "config error" in err

    def test_missing_file(self, capsys):
        assert run(["validate", "--config", "/nonexistent/x.toml"], capsys)[0] == cli.EXIT_CONFIG

    def test_no_command(self, capsys):
        assert run([], capsys)[0] == cli.EXIT_CONFIG

    def test_filters_flag(self, tiny, capsys):
        code, out, _ = run(["--print-config", "--config", tiny, "--filters", "mekf,tfg"], capsys)
        assert 'filters = [\n    "mekf",\n    "tfg",\n]' in out or 'filters = ["mekf", "tfg"]' in out


class TestBench:
    def test_outputs(self, tiny, tmp_path, capsys):
        out_dir = tmp_path / "out"
        code, out, _ = run(["bench", "--config", tiny, "--out", out_dir], capsys)
        assert code == 0
        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert manifest["seed"] == 11 and manifest["version"] == cli.__version__
        for f in ("tfg", "imperfect", "mekf"):
            path = out_dir / f"{f}.csv"
            assert manifest["csv"][f] == str(path)
            raw = path.read_bytes()
            assert raw.startswith(b"time_s,rmse_att_deg,rmse_vel,rmse_pos,rmse_bw_degps,rmse_ba\r\n")
            rows = list(csv.reader(raw.decode().splitlines()))
            assert len(rows) == 102
            # full double precision survives the text round trip
            assert all(len(r) == 6 for r in rows)
        summary = list(csv.reader((out_dir / "summary.csv").read_text().splitlines()))
        assert summary[0] == ["filter", "rmse_att_deg", "rmse_vel", "rmse_pos", "rmse_bw_degps", "rmse_ba"]
        assert [r[0] for r in summary[1:]] == ["tfg", "imperfect", "mekf"]

    def test_values_round_trip(self, tiny, tmp_path, capsys):
        from twoframes.scenarios import run_monte_carlo

        out_dir = tmp_path / "out"
        run(["bench", "--config", tiny, "--out", out_dir, "--filters", "tfg"], capsys)
        rows = list(csv.reader((out_dir / "tfg.csv").read_text().splitlines()))[1:]
        values = np.array([[float(v) for v in r] for r in rows])
        res = run_monte_carlo(cli.load_config(str(tiny)).replace(filters=["tfg"]))
        np.testing.assert_array_equal(values[:, 1], res.rmse["tfg"]["rmse_att_deg"])

    def test_replay_is_byte_identical(self, tiny, tmp_path, capsys):
        a, b = tmp_path / "a", tmp_path / "b"
        assert run(["bench", "--config", tiny, "--out", a], capsys)[0] == 0
        assert run(["bench", "--config", a / "manifest.json", "--out", b], capsys)[0] == 0
        for name in ("tfg.csv", "imperfect.csv", "mekf.csv", "summary.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_seed_flag_changes_output(self, tiny, tmp_path, capsys):
        a, b = tmp_path / "a", tmp_path / "b"
        run(["bench", "--config", tiny, "--out", a, "--filters", "mekf"], capsys)
        run(["bench", "--config", tiny, "--out", b, "--filters", "mekf", "--seed", 12], capsys)
        assert (a / "mekf.csv").read_bytes() != (b / "mekf.csv").read_bytes()

    def test_numerical_failure(self, tiny, tmp_path, capsys, monkeypatch):
        def boom(cfg):
            raise FloatingPointError("overflow")

        monkeypatch.setattr(cli, "run_monte_carlo", boom)
        code, _, err = run(["bench", "--config", tiny, "--out", tmp_path / "o"], capsys)
        assert code == cli.EXIT_NUMERIC and "numerical failure" in err


class TestSelftest:
    def test_passes(self, capsys):
        code, out, _ = run(["selftest"], capsys)
        assert code == 0
        assert out.count("PASS") == 5

    def test_sign_flip_in_nu_is_caught(self, capsys, monkeypatch):
        orig = twoframes.group.nu

        def flipped(xi, d=None):
            xi = np.asarray(xi)
            return orig(-xi, d) if xi.shape[-1] == 3 else orig(xi, d)

        monkeypatch.setattr(twoframes.group, "nu", flipped)
        code, out, _ = run(["selftest"], capsys)
        assert code == cli.EXIT_INVALID
        assert "FAIL exp_embedding" in out

    @pytest.mark.parametrize("tol,code", [(1e-30, 1), (1.0, 0)])
    def test_tolerance_override(self, capsys, tol, code):
        rc, out, _ = run(["selftest", "--tol", tol], capsys)
        assert rc == code
        assert f"(tol {tol:.0e})" in out
