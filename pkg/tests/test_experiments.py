import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np
import pytest

from slrlab.errors import ConfigError
from slrlab.experiments import (
    DENSITY_ANALYTIC,
    DENSITY_KDE,
    REFERENCE_ALPHA,
    SCORE_RF,
    SCORE_SQUARED_DIFF,
    StudyConfig,
    build_rf_pipeline,
    build_univariate_pipeline,
    default_beta,
    default_mvn,
    default_univariate,
    run_bin_agreement,
    run_bounds_report,
    run_contour_grid,
    run_discrepancy_hist,
    run_kl_report,
    run_rf_study,
)
from slrlab.rng import derive_rng


def read_csv(path):
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    return header, rows


def tree_digest(root: Path) -> dict:
    out = {}
    for path in sorted(root.rglob("*")):
        if path.is_file():
            out[str(path.relative_to(root))] = hashlib.sha256(path.read_bytes()).hexdigest()
    return out


def small_cfg(model, out_dir, **kw):
    defaults = dict(seed=42, n_train=600, n_eval=600, threads=1)
    defaults.update(kw)
    return StudyConfig(model=model, out_dir=str(out_dir), **defaults)


class TestStudyConfig:
    def test_analytic_requires_univariate_squared_diff(self):
        with pytest.raises(ConfigError):
            StudyConfig(model=default_mvn(), density_kind=DENSITY_ANALYTIC)
        with pytest.raises(ConfigError):
            StudyConfig(
                model=default_univariate(),
                score_kind=SCORE_RF,
                density_kind=DENSITY_ANALYTIC,
            )

    def test_kde_on_mvn_allowed(self):
        StudyConfig(model=default_mvn(), score_kind=SCORE_RF, density_kind=DENSITY_KDE)


class TestContour:
    def test_grid_values_and_geometry(self, tmp_path, univariate_model):
        cfg = small_cfg(univariate_model, tmp_path)
        (path,) = run_contour_grid(cfg)
        header, rows = read_csv(path)
        assert header == ["x", "y", "log_lr", "log_slr"]
        table = {
            (round(float(r[0]), 6), round(float(r[1]), 6)): (float(r[2]), float(r[3]))
            for r in rows
        }
        # log LR constant in x; log SLR constant along y = x + b.
        assert table[(-2.0, 1.0)][0] == table[(2.0, 1.0)][0]
        assert table[(0.0, 0.5)][1] == pytest.approx(table[(1.0, 1.5)][1], abs=1e-9)
        lr, slr = table[(2.0, -2.0)]
        assert lr - slr == pytest.approx(44.84, abs=0.01)

    def test_meta_sidecar(self, tmp_path, univariate_model):
        cfg = small_cfg(univariate_model, tmp_path)
        (path,) = run_contour_grid(cfg)
        meta = json.loads(Path(path[: -len(".csv")] + ".meta.json").read_text())
        assert meta["study"] == "contour"
        assert meta["seed"] == 42
        assert "config_hash" in meta and "artifact_version" in meta


class TestDiscrepancyHist:
    def test_schema_and_tail_metadata(self, tmp_path, univariate_model):
        cfg = small_cfg(univariate_model, tmp_path)
        (path,) = run_discrepancy_hist(cfg, n_per_hyp=400)
        header, rows = read_csv(path)
        assert header == ["hypothesis", "log_slr_minus_log_lr"]
        assert len(rows) == 800
        assert {r[0] for r in rows} == {"Hp", "Hd"}
        meta = json.loads(Path(path[: -len(".csv")] + ".meta.json").read_text())
        assert 0.0 <= meta["hd_tail_fraction_gt_10"] <= 1.0

    def test_hd_panel_shape(self, tmp_path, univariate_model):
        # Right-skewed under Hd: mean far above median, long right tail,
        # short left tail.
        cfg = small_cfg(univariate_model, tmp_path)
        (path,) = run_discrepancy_hist(cfg, n_per_hyp=5000)
        _, rows = read_csv(path)
        hd = np.array([float(r[1]) for r in rows if r[0] == "Hd"])
        assert hd.mean() - np.median(hd) > 2.0
        assert hd.max() > 20.0
        assert hd.min() > -15.0

    def test_hp_panel_central_mass(self, tmp_path, univariate_model):
        cfg = small_cfg(univariate_model, tmp_path)
        (path,) = run_discrepancy_hist(cfg, n_per_hyp=5000)
        _, rows = read_csv(path)
        hp = np.array([float(r[1]) for r in rows if r[0] == "Hp"])
        lo, hi = np.quantile(hp, [0.025, 0.975])
        assert -4.0 < lo and hi < 4.0

    def test_rerun_is_byte_identical(self, tmp_path, univariate_model):
        cfg1 = small_cfg(univariate_model, tmp_path / "a")
        cfg2 = small_cfg(univariate_model, tmp_path / "b")
        run_discrepancy_hist(cfg1, n_per_hyp=300)
        run_discrepancy_hist(cfg2, n_per_hyp=300)
        assert tree_digest(tmp_path / "a") == tree_digest(tmp_path / "b")


class TestBinAgreement:
    def test_outputs_and_monotonicity(self, tmp_path, univariate_model):
        cfg = small_cfg(univariate_model, tmp_path)
        heatmap_path, table_path = run_bin_agreement(cfg, n_per_hyp=4000)
        header, rows = read_csv(table_path)
        assert header == ["mu_x", "sigma_w", "hd_agreement", "hp_agreement"]
        assert len(rows) == 4
        hd = [float(r[2]) for r in rows]
        assert hd == sorted(hd)
        header, rows = read_csv(heatmap_path)
        assert header == [
            "mu_x", "sigma_w", "hypothesis", "slr_bin", "lr_bin", "probability", "count",
        ]
        probs = [float(r[5]) for r in rows]
        assert all(0.0 <= p <= 1.0 for p in probs)


class TestRfStudy:
    def test_outputs(self, tmp_path, mvn_model):
        cfg = small_cfg(mvn_model, tmp_path, score_kind=SCORE_RF, density_kind=DENSITY_KDE)
        hist_path, scatter_path, table_path = run_rf_study(cfg)
        header, rows = read_csv(hist_path)
        assert header == ["hypothesis", "score"]
        scores = [float(r[1]) for r in rows]
        assert all(0.0 <= s <= 1.0 for s in scores)
        header, rows = read_csv(scatter_path)
        assert header == ["hypothesis", "score", "log_lr", "log_slr"]
        assert len(rows) == 600
        header, rows = read_csv(table_path)
        assert header == ["alpha", "p_hd", "p_hp", "bound"]
        assert [float(r[0]) for r in rows] == [100.0, 50.0, 20.0, 10.0, 5.0, 2.0]
        meta = json.loads(Path(table_path[: -len(".csv")] + ".meta.json").read_text())
        assert meta["reference_alpha"] == REFERENCE_ALPHA

    def test_beta_study_writes_under_family_dir(self, tmp_path, beta_model):
        cfg = small_cfg(beta_model, tmp_path, score_kind=SCORE_RF, density_kind=DENSITY_KDE)
        paths = run_rf_study(cfg)
        assert all("rf_beta" in p for p in paths)

    def test_paper_literal_beta_collapses_lr(self, tmp_path):
        # Identical Hp and Hd shapes make every exact LR equal exactly 1.
        from slrlab.models import BetaVectorPairModel

        literal = BetaVectorPairModel(alpha_x=2.0, beta_x=1.0, alpha_y=2.0, beta_y=1.0, dim=5)
        cfg = small_cfg(literal, tmp_path, score_kind=SCORE_RF, density_kind=DENSITY_KDE)
        _, scatter_path, _ = run_rf_study(cfg)
        _, rows = read_csv(scatter_path)
        assert all(float(r[2]) == 0.0 for r in rows)

    def test_rerun_is_byte_identical(self, tmp_path, mvn_model):
        cfg1 = small_cfg(mvn_model, tmp_path / "a", score_kind=SCORE_RF, density_kind=DENSITY_KDE)
        cfg2 = small_cfg(mvn_model, tmp_path / "b", score_kind=SCORE_RF, density_kind=DENSITY_KDE)
        run_rf_study(cfg1)
        run_rf_study(cfg2)
        assert tree_digest(tmp_path / "a") == tree_digest(tmp_path / "b")


class TestReports:
    def test_bounds_report_schema_and_markov_rows(self, tmp_path, univariate_model):
        cfg = small_cfg(univariate_model, tmp_path)
        (path,) = run_bounds_report(cfg)
        header, rows = read_csv(path)
        assert header == ["check", "hypothesis", "alpha", "empirical", "bound", "slack", "pass"]
        markov = [r for r in rows if r[0].startswith("markov.")]
        # 6 alpha levels x 2 hypotheses x 4 pipelines.
        assert len(markov) == 48
        names = {r[0].split(".", 1)[1] for r in markov}
        assert names == {"univariate_analytic", "univariate_kde", "mvn", "beta"}
        # With the exact analytic SLR the bounds are theorems and must hold;
        # the estimated-SLR rows are honest reports and may fail where the
        # Hp-score density has no sample support.
        exact = [r for r in markov if r[0] == "markov.univariate_analytic"]
        assert all(r[6] == "True" for r in exact)

    def test_tail_rows_are_exact_bounds(self, tmp_path, univariate_model):
        cfg = small_cfg(univariate_model, tmp_path)
        (path,) = run_bounds_report(cfg)
        _, rows = read_csv(path)
        tails = [r for r in rows if r[0].startswith("tail_product.")]
        assert tails and all(r[6] == "True" for r in tails)
        for r in tails:
            assert float(r[3]) <= float(r[4])

    def test_kl_report(self, tmp_path, univariate_model):
        cfg = small_cfg(univariate_model, tmp_path)
        (path,) = run_kl_report(cfg)
        header, rows = read_csv(path)
        assert header == ["family", "direction", "raw_kl", "score_kl", "std_error", "within_bound"]
        assert len(rows) == 6
        raw = {(r[0], r[1]): float(r[2]) for r in rows}
        assert raw[("univariate_analytic", "p_to_d")] == pytest.approx(1.1483, abs=1e-4)
        assert raw[("mvn", "p_to_d")] == pytest.approx(1.4965, abs=1e-3)
        assert raw[("beta", "p_to_d")] == pytest.approx(5.0, abs=1e-9)


def test_train_eval_streams_are_disjoint(mvn_model):
    # Training and evaluation use distinct derived streams: the raw draws
    # must differ even for the same master seed.
    from slrlab.models import Hypothesis, sample_pairs

    a = sample_pairs(mvn_model, Hypothesis.Hp, derive_rng(42, "rf.mvn.train.Hp"), 100)[0]
    b = sample_pairs(mvn_model, Hypothesis.Hp, derive_rng(42, "rf.mvn.eval.Hp"), 100)[0]
    assert not np.allclose(a, b)


def test_rf_pipeline_shared_equals_standalone(tmp_path, mvn_model):
    # The same pipeline built twice reproduces identical sample sets.
    p1 = build_rf_pipeline(mvn_model, 400, 400, 42)
    p2 = build_rf_pipeline(mvn_model, 400, 400, 42)
    assert np.array_equal(p1.samples.log_slr, p2.samples.log_slr)
    assert np.array_equal(p1.samples.log_lr, p2.samples.log_lr)
