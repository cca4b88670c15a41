import hashlib
import json
from pathlib import Path

import pytest

from slrlab.cli import main


def run_cli(argv):
    return main(argv)


def tree_digest(root: Path) -> dict:
    out = {}
    for path in sorted(root.rglob("*")):
        if path.is_file():
            out[str(path.relative_to(root))] = hashlib.sha256(path.read_bytes()).hexdigest()
    return out


@pytest.fixture
def simple_config(tmp_path):
    cfg = {
        "family": "univariate_gaussian",
        "mu_x": 0.0,
        "mu_b": 0.0,
        "sigma_w": 0.2,
        "sigma_b": 1.0,
        "seed": 7,
    }
    path = tmp_path / "simple.json"
    path.write_text(json.dumps(cfg))
    return path


class TestSmoke:
    def test_contour_writes_csv(self, tmp_path, simple_config, capsys):
        code = run_cli(
            ["contour", "--config", str(simple_config), "--out", str(tmp_path / "out")]
        )
        assert code == 0
        assert (tmp_path / "out" / "contour" / "contour.csv").exists()
        assert "wrote" in capsys.readouterr().out

    def test_missing_config_names_path(self, tmp_path, capsys):
        code = run_cli(["contour", "--config", str(tmp_path / "nope.json")])
        assert code == 1
        assert "nope.json" in capsys.readouterr().err

    def test_unknown_config_field(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"familly": "mvn"}))
        code = run_cli(["hist", "--config", str(path)])
        assert code == 1
        assert "familly" in capsys.readouterr().err

    def test_invalid_model_field_is_config_error(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps(
                {"family": "univariate_gaussian", "mu_x": 0, "mu_b": 0,
                 "sigma_w": -1.0, "sigma_b": 1.0}
            )
        )
        code = run_cli(["contour", "--config", str(path)])
        assert code == 1
        assert "sigma_w" in capsys.readouterr().err

    def test_rf_study_rejects_univariate(self, simple_config, capsys):
        code = run_cli(["rf-study", "--config", str(simple_config)])
        assert code == 1
        assert "mvn or beta" in capsys.readouterr().err

    def test_help_lists_subcommands(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            run_cli(["--help"])
        assert excinfo.value.code == 0
        out = capsys.readouterr().out
        for name in ("contour", "hist", "bins", "rf-study", "bounds", "kl", "all"):
            assert name in out

    def test_flags_override_config(self, tmp_path, simple_config):
        out = tmp_path / "flagged"
        code = run_cli(
            ["hist", "--config", str(simple_config), "--out", str(out), "--seed", "9",
             "--n-eval", "200"]
        )
        assert code == 0
        meta = json.loads((out / "hist" / "disc_hist.meta.json").read_text())
        assert meta["seed"] == 9
        assert meta["n_per_hypothesis"] == 100


class TestDeterminism:
    def test_all_seed_42_twice_is_byte_identical(self, tmp_path):
        args = ["all", "--seed", "42", "--n-train", "400", "--n-eval", "400", "--threads", "2"]
        assert run_cli(args + ["--out", str(tmp_path / "run1")]) == 0
        assert run_cli(args + ["--out", str(tmp_path / "run2")]) == 0
        d1 = tree_digest(tmp_path / "run1")
        d2 = tree_digest(tmp_path / "run2")
        assert d1 == d2
        expected = {
            "contour/contour.csv",
            "hist/disc_hist.csv",
            "bins/heatmap.csv",
            "bins/table1.csv",
            "rf_mvn/scores_hist.csv",
            "rf_mvn/scatter.csv",
            "rf_mvn/table2.csv",
            "rf_beta/scores_hist.csv",
            "rf_beta/scatter.csv",
            "rf_beta/table2.csv",
            "bounds/bounds_report.csv",
            "kl/kl_report.csv",
        }
        assert expected <= set(d1)

    def test_outputs_confined_to_out_dir(self, tmp_path, monkeypatch):
        workdir = tmp_path / "cwd"
        workdir.mkdir()
        monkeypatch.chdir(workdir)
        out = tmp_path / "only_here"
        assert run_cli(["hist", "--out", str(out), "--n-eval", "100"]) == 0
        assert not list(workdir.iterdir())
        assert (out / "hist" / "disc_hist.csv").exists()
