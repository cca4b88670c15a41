"""Seeded end-to-end studies writing CSV artifacts plus JSON sidecars.

Each study derives every random stream it needs from (master seed, purpose
tag), so a rerun with the same configuration produces byte-identical output
files, and the same figures fall out of `all` runs and standalone runs.

Output tree: <out>/<study>/<name>.csv with <name>.meta.json alongside.
Fixed names: contour.csv, disc_hist.csv, heatmap.csv, table1.csv,
scores_hist.csv, scatter.csv, table2.csv, bounds_report.csv, kl_report.csv.
"""

import csv
import hashlib
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import __version__
from .binning import default_scale, overall_agreement, agreement_matrix
from .bounds import (
    DIRECTION_D_TO_P,
    DIRECTION_P_TO_D,
    LabeledScoreSamples,
    TRANSFORM_INV_LR,
    TRANSFORM_LR,
    check_markov_bounds,
    conditional_mean_by_score_bin,
    kl_raw_exact,
    kl_score_mc,
    markov_lower_bound,
    tail_product_bound,
)
from .density import SUPPORT_REAL_LINE, SUPPORT_UNIT, kde_fit, kde_logdensity_batch
from .errors import ConfigError
from .forest import (
    ForestParams,
    TrainingSet,
    clamp_scores,
    pair_features,
    rf_score_batch,
    train_forest,
    training_set_from_pairs,
)
from .models import (
    BetaVectorPairModel,
    Hypothesis,
    MultivariateGaussianPairModel,
    PairModel,
    UnivariateGaussianPairModel,
    log_lr_batch,
    sample_pairs,
)
from .rng import derive_rng
from .scores import AnalyticScoreModel, analytic_score_logdensity, analytic_slr, scores_squared_diff

ALPHA_LEVELS = (100.0, 50.0, 20.0, 10.0, 5.0, 2.0)
REFERENCE_ALPHA = 20.0  # the 95% bound drawn on scatter figures
TABLE1_SETTINGS = ((0.0, 0.1), (2.0, 0.1), (0.0, 0.01), (2.0, 0.01))

SCORE_SQUARED_DIFF = "squared_diff"
SCORE_EUCLIDEAN = "euclidean"
SCORE_RF = "rf"
DENSITY_ANALYTIC = "analytic"
DENSITY_KDE = "kde"


def default_univariate() -> UnivariateGaussianPairModel:
    return UnivariateGaussianPairModel(mu_x=0.0, mu_b=0.0, sigma_w=0.2, sigma_b=1.0)


def default_mvn(d: int = 5) -> MultivariateGaussianPairModel:
    return MultivariateGaussianPairModel(
        mu_x=np.full(d, 0.5),
        mu_b=np.zeros(d),
        cov_w=0.5 * np.eye(d),
        cov_b=np.eye(d),
    )


def default_beta() -> BetaVectorPairModel:
    # The alternative-source shapes are flipped to (1, 2) so the two
    # hypotheses actually differ; (2, 1)/(2, 1) stays expressible via config.
    return BetaVectorPairModel(alpha_x=2.0, beta_x=1.0, alpha_y=1.0, beta_y=2.0, dim=5)


@dataclass(frozen=True)
class StudyConfig:
    model: PairModel
    seed: int = 42
    out_dir: str = "out"
    n_train: int = 20_000
    n_eval: int = 20_000
    score_kind: str = SCORE_SQUARED_DIFF
    density_kind: str = DENSITY_ANALYTIC
    threads: int = 1

    def __post_init__(self):
        if self.density_kind not in (DENSITY_ANALYTIC, DENSITY_KDE):
            raise ConfigError(f"unknown density kind {self.density_kind!r}")
        if self.score_kind not in (SCORE_SQUARED_DIFF, SCORE_EUCLIDEAN, SCORE_RF):
            raise ConfigError(f"unknown score kind {self.score_kind!r}")
        if self.density_kind == DENSITY_ANALYTIC and (
            self.score_kind != SCORE_SQUARED_DIFF
            or not isinstance(self.model, UnivariateGaussianPairModel)
        ):
            raise ConfigError(
                "analytic densities are only available for the squared-difference "
                "score on the univariate model"
            )
        if self.n_train < 2 or self.n_eval < 2:
            raise ConfigError("n_train and n_eval must be at least 2")


# ---------------------------------------------------------------------------
# CSV and sidecar plumbing.
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_csv(path: str, header: list, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def config_hash(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def write_meta(csv_path: str, payload: dict) -> None:
    meta_path = csv_path[: -len(".csv")] + ".meta.json"
    meta = dict(payload)
    meta["artifact_version"] = __version__
    meta["config_hash"] = config_hash(payload)
    with open(meta_path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _study_dir(out_dir: str, study: str) -> str:
    path = os.path.join(out_dir, study)
    os.makedirs(path, exist_ok=True)
    return path


def _model_payload(model: PairModel) -> dict:
    if isinstance(model, UnivariateGaussianPairModel):
        return {
            "family": "univariate_gaussian",
            "mu_x": model.mu_x,
            "mu_b": model.mu_b,
            "sigma_w": model.sigma_w,
            "sigma_b": model.sigma_b,
        }
    if isinstance(model, MultivariateGaussianPairModel):
        return {
            "family": "mvn",
            "mu_x": model.mu_x.tolist(),
            "mu_b": model.mu_b.tolist(),
            "Sigma_w": model.cov_w.tolist(),
            "Sigma_b": model.cov_b.tolist(),
            "d": model.dim,
        }
    return {
        "family": "beta",
        "alpha_x": model.alpha_x,
        "beta_x": model.beta_x,
        "alpha_y": model.alpha_y,
        "beta_y": model.beta_y,
        "d": model.dim,
    }


# ---------------------------------------------------------------------------
# Sample-set builders shared by the studies.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyPipeline:
    """Labeled samples plus the per-hypothesis log-density callables used to
    produce the SLRs (analytic or KDE-backed)."""

    samples: LabeledScoreSamples
    logdensity_hp: object
    logdensity_hd: object
    scores_hp: np.ndarray
    scores_hd: np.ndarray


def build_univariate_pipeline(
    model: UnivariateGaussianPairModel,
    n_eval: int,
    seed: int,
    density_kind: str = DENSITY_ANALYTIC,
    purpose: str = "univariate",
) -> FamilyPipeline:
    n_half = n_eval // 2
    x_hp, y_hp = sample_pairs(model, Hypothesis.Hp, derive_rng(seed, f"{purpose}.eval.Hp"), n_half)
    x_hd, y_hd = sample_pairs(model, Hypothesis.Hd, derive_rng(seed, f"{purpose}.eval.Hd"), n_half)
    s_hp = scores_squared_diff(x_hp, y_hp)
    s_hd = scores_squared_diff(x_hd, y_hd)
    log_lr = np.concatenate([log_lr_batch(model, y_hp), log_lr_batch(model, y_hd)])
    scores = np.concatenate([s_hp, s_hd])
    hyp = np.concatenate([np.ones(n_half, dtype=np.int64), np.zeros(n_half, dtype=np.int64)])
    if density_kind == DENSITY_ANALYTIC:
        asm = AnalyticScoreModel.from_univariate(model)
        dens_p = lambda s: analytic_score_logdensity(asm, Hypothesis.Hp, s)  # noqa: E731
        dens_d = lambda s: analytic_score_logdensity(asm, Hypothesis.Hd, s)  # noqa: E731
        log_slr = analytic_slr(asm, scores)
    else:
        kde_p = kde_fit(s_hp, support=SUPPORT_REAL_LINE)
        kde_d = kde_fit(s_hd, support=SUPPORT_REAL_LINE)
        dens_p = lambda s: kde_logdensity_batch(kde_p, s)  # noqa: E731
        dens_d = lambda s: kde_logdensity_batch(kde_d, s)  # noqa: E731
        log_slr = dens_p(scores) - dens_d(scores)
    samples = LabeledScoreSamples(scores=scores, log_lr=log_lr, log_slr=log_slr, hypothesis=hyp)
    return FamilyPipeline(
        samples=samples,
        logdensity_hp=dens_p,
        logdensity_hd=dens_d,
        scores_hp=s_hp,
        scores_hd=s_hd,
    )


def build_rf_pipeline(
    model: PairModel,
    n_train: int,
    n_eval: int,
    seed: int,
    threads: int = 1,
    purpose: str | None = None,
) -> FamilyPipeline:
    """Train the forest on fresh pairs, score held-out pairs, and fit
    unit-support KDEs to the per-hypothesis score samples."""
    family = "beta" if isinstance(model, BetaVectorPairModel) else "mvn"
    tag = purpose or f"rf.{family}"
    n_train_half = n_train // 2
    n_eval_half = n_eval // 2
    x_hp, y_hp = sample_pairs(model, Hypothesis.Hp, derive_rng(seed, f"{tag}.train.Hp"), n_train_half)
    x_hd, y_hd = sample_pairs(model, Hypothesis.Hd, derive_rng(seed, f"{tag}.train.Hd"), n_train_half)
    train = training_set_from_pairs(x_hp, y_hp, x_hd, y_hd)
    forest_seed = int(derive_rng(seed, f"{tag}.forest").integers(0, 2**62))
    params = ForestParams(seed=forest_seed)
    forest = train_forest(train, params, threads=threads)

    ex_hp, ey_hp = sample_pairs(model, Hypothesis.Hp, derive_rng(seed, f"{tag}.eval.Hp"), n_eval_half)
    ex_hd, ey_hd = sample_pairs(model, Hypothesis.Hd, derive_rng(seed, f"{tag}.eval.Hd"), n_eval_half)
    s_hp = clamp_scores(rf_score_batch(forest, pair_features(ex_hp, ey_hp)), n_train)
    s_hd = clamp_scores(rf_score_batch(forest, pair_features(ex_hd, ey_hd)), n_train)
    log_lr = np.concatenate([log_lr_batch(model, ey_hp), log_lr_batch(model, ey_hd)])
    scores = np.concatenate([s_hp, s_hd])
    hyp = np.concatenate(
        [np.ones(n_eval_half, dtype=np.int64), np.zeros(n_eval_half, dtype=np.int64)]
    )
    kde_p = kde_fit(s_hp, support=SUPPORT_UNIT)
    kde_d = kde_fit(s_hd, support=SUPPORT_UNIT)
    dens_p = lambda s: kde_logdensity_batch(kde_p, s)  # noqa: E731
    dens_d = lambda s: kde_logdensity_batch(kde_d, s)  # noqa: E731
    log_slr = dens_p(scores) - dens_d(scores)
    samples = LabeledScoreSamples(scores=scores, log_lr=log_lr, log_slr=log_slr, hypothesis=hyp)
    return FamilyPipeline(
        samples=samples,
        logdensity_hp=dens_p,
        logdensity_hd=dens_d,
        scores_hp=s_hp,
        scores_hd=s_hd,
    )


# ---------------------------------------------------------------------------
# Studies.
# ---------------------------------------------------------------------------


def run_contour_grid(cfg: StudyConfig, grid_lo: float = -2.0, grid_hi: float = 2.0, step: float = 0.05) -> list:
    """Exact log LR and log SLR on an (x, y) grid; no sampling involved."""
    model = cfg.model
    if cfg.density_kind != DENSITY_ANALYTIC:
        raise ConfigError("the contour study requires analytic densities")
    out = _study_dir(cfg.out_dir, "contour")
    asm = AnalyticScoreModel.from_univariate(model)
    axis = np.arange(grid_lo, grid_hi + step / 2, step)
    rows = []
    for x in axis:
        y = axis
        log_lr = log_lr_batch(model, y)
        log_slr = analytic_slr(asm, scores_squared_diff(np.full_like(y, x), y))
        for yi, lr_i, slr_i in zip(y, log_lr, log_slr):
            rows.append((x, yi, lr_i, slr_i))
    path = os.path.join(out, "contour.csv")
    write_csv(path, ["x", "y", "log_lr", "log_slr"], rows)
    write_meta(
        path,
        {
            "study": "contour",
            "seed": cfg.seed,
            "model": _model_payload(model),
            "grid": [grid_lo, grid_hi, step],
        },
    )
    return [path]


def run_discrepancy_hist(cfg: StudyConfig, n_per_hyp: int = 5000) -> list:
    """Per-sample log(SLR) - log(LR) under each hypothesis, with the Hd tail
    fraction P(diff > 10) recorded in the sidecar."""
    model = cfg.model
    out = _study_dir(cfg.out_dir, "hist")
    pipeline = build_univariate_pipeline(
        model, 2 * n_per_hyp, cfg.seed, DENSITY_ANALYTIC, purpose="hist"
    )
    diffs = pipeline.samples.log_slr - pipeline.samples.log_lr
    hyp = pipeline.samples.hypothesis
    rows = [
        ("Hp" if h == 1 else "Hd", d) for h, d in zip(hyp, diffs)
    ]
    tail = float(np.mean(diffs[hyp == 0] > 10.0))
    path = os.path.join(out, "disc_hist.csv")
    write_csv(path, ["hypothesis", "log_slr_minus_log_lr"], rows)
    write_meta(
        path,
        {
            "study": "hist",
            "seed": cfg.seed,
            "model": _model_payload(model),
            "n_per_hypothesis": n_per_hyp,
            "hd_tail_fraction_gt_10": tail,
        },
    )
    return [path]


def run_bin_agreement(cfg: StudyConfig, n_per_hyp: int = 100_000) -> list:
    """Agreement heatmaps and overall agreement for the four
    (mu_x, sigma_w) settings, mu_b = 0 and sigma_b = 1 held fixed."""
    out = _study_dir(cfg.out_dir, "bins")
    scale = default_scale()
    heatmap_rows = []
    table_rows = []
    for idx, (mu_x, sigma_w) in enumerate(TABLE1_SETTINGS):
        model = UnivariateGaussianPairModel(mu_x=mu_x, mu_b=0.0, sigma_w=sigma_w, sigma_b=1.0)
        pipeline = build_univariate_pipeline(
            model, 2 * n_per_hyp, cfg.seed, DENSITY_ANALYTIC, purpose=f"bins.{idx}"
        )
        matrix = agreement_matrix(pipeline.samples, scale)
        overall = overall_agreement(pipeline.samples, scale)
        for h in Hypothesis:
            prob = matrix.probs[h]
            count = matrix.counts[h]
            for i in range(matrix.n_bins):
                if not matrix.row_defined[h][i]:
                    continue
                for j in range(matrix.n_bins):
                    heatmap_rows.append(
                        (mu_x, sigma_w, h.value, i, j, prob[i, j], count[i, j])
                    )
        table_rows.append((mu_x, sigma_w, overall[Hypothesis.Hd], overall[Hypothesis.Hp]))
    heatmap_path = os.path.join(out, "heatmap.csv")
    write_csv(
        heatmap_path,
        ["mu_x", "sigma_w", "hypothesis", "slr_bin", "lr_bin", "probability", "count"],
        heatmap_rows,
    )
    table_path = os.path.join(out, "table1.csv")
    write_csv(table_path, ["mu_x", "sigma_w", "hd_agreement", "hp_agreement"], table_rows)
    meta = {
        "study": "bins",
        "seed": cfg.seed,
        "n_per_hypothesis": n_per_hyp,
        "settings": [list(s) for s in TABLE1_SETTINGS],
    }
    write_meta(heatmap_path, meta)
    write_meta(table_path, meta)
    return [heatmap_path, table_path]


def run_rf_study(cfg: StudyConfig, pipeline: FamilyPipeline | None = None) -> list:
    """Forest-scored study: score histograms, LR-vs-SLR scatter data, and the
    Markov-bound table over the standard alpha levels."""
    model = cfg.model
    family = "beta" if isinstance(model, BetaVectorPairModel) else "mvn"
    out = _study_dir(cfg.out_dir, f"rf_{family}")
    if pipeline is None:
        pipeline = build_rf_pipeline(model, cfg.n_train, cfg.n_eval, cfg.seed, cfg.threads)
    samples = pipeline.samples
    hyp_names = np.where(samples.hypothesis == 1, "Hp", "Hd")

    hist_path = os.path.join(out, "scores_hist.csv")
    write_csv(hist_path, ["hypothesis", "score"], zip(hyp_names, samples.scores))

    scatter_path = os.path.join(out, "scatter.csv")
    write_csv(
        scatter_path,
        ["hypothesis", "score", "log_lr", "log_slr"],
        zip(hyp_names, samples.scores, samples.log_lr, samples.log_slr),
    )

    table_rows = []
    for alpha in ALPHA_LEVELS:
        check = check_markov_bounds(samples, alpha)
        table_rows.append((alpha, check.p_hd, check.p_hp, check.bound))
    table_path = os.path.join(out, "table2.csv")
    write_csv(table_path, ["alpha", "p_hd", "p_hp", "bound"], table_rows)

    meta = {
        "study": f"rf_{family}",
        "seed": cfg.seed,
        "model": _model_payload(model),
        "n_train": cfg.n_train,
        "n_eval": cfg.n_eval,
        "reference_alpha": REFERENCE_ALPHA,
    }
    for path in (hist_path, scatter_path, table_path):
        write_meta(path, meta)
    return [hist_path, scatter_path, table_path]


def _bounds_rows_for(name: str, pipeline: FamilyPipeline, beta_threshold: float = 1000.0):
    """Bound-report rows for one family pipeline."""
    samples = pipeline.samples
    rows = []
    for alpha in ALPHA_LEVELS:
        check = check_markov_bounds(samples, alpha)
        rows.append(
            (f"markov.{name}", "Hp", alpha, check.p_hp, check.bound, check.slack_hp,
             check.satisfied_hp)
        )
        rows.append(
            (f"markov.{name}", "Hd", alpha, check.p_hd, check.bound, check.slack_hd,
             check.satisfied_hd)
        )
    # Conditional-expectation inequalities, checked per populated score bin.
    for h, transform, label in (
        (Hypothesis.Hp, TRANSFORM_LR, "expectation_lr"),
        (Hypothesis.Hd, TRANSFORM_INV_LR, "expectation_inv_lr"),
    ):
        means = conditional_mean_by_score_bin(samples, h, n_bins=50, transform=transform)
        populated = means.counts >= 200
        if populated.any():
            sign = 1.0 if transform == TRANSFORM_LR else -1.0
            ok = means.log_mean[populated] >= sign * means.mean_log_slr[populated]
            frac = float(np.mean(ok))
        else:
            frac = float("nan")
        rows.append((f"{label}.{name}", h.value, "", frac, 0.95, 0.0, frac >= 0.95))
    # Tail bound: the reported value is itself the exact empirical frequency.
    tail = tail_product_bound(samples, beta_threshold)
    hd = samples.under(Hypothesis.Hd)
    for alpha in ALPHA_LEVELS:
        joint = float(
            np.mean(
                (hd.log_lr < hd.log_slr - math.log(alpha))
                & (hd.log_slr > math.log(beta_threshold))
            )
        )
        rows.append((f"tail_product.{name}", "Hd", alpha, joint, tail, 0.0, joint <= tail))
    return rows


def run_bounds_report(
    cfg: StudyConfig,
    pipelines: dict | None = None,
) -> list:
    """Inequality suite across the three model families (analytic and KDE
    SLRs for the univariate model, KDE SLRs for the forest-scored ones)."""
    out = _study_dir(cfg.out_dir, "bounds")
    pipelines = dict(pipelines) if pipelines else {}
    uni = default_univariate()
    rows = []
    if "univariate_analytic" not in pipelines:
        pipelines["univariate_analytic"] = build_univariate_pipeline(
            uni, cfg.n_eval, cfg.seed, DENSITY_ANALYTIC, purpose="univariate"
        )
    if "univariate_kde" not in pipelines:
        pipelines["univariate_kde"] = build_univariate_pipeline(
            uni, cfg.n_eval, cfg.seed, DENSITY_KDE, purpose="univariate"
        )
    if "mvn" not in pipelines:
        pipelines["mvn"] = build_rf_pipeline(
            default_mvn(), cfg.n_train, cfg.n_eval, cfg.seed, cfg.threads
        )
    if "beta" not in pipelines:
        pipelines["beta"] = build_rf_pipeline(
            default_beta(), cfg.n_train, cfg.n_eval, cfg.seed, cfg.threads
        )
    for name in ("univariate_analytic", "univariate_kde", "mvn", "beta"):
        rows.extend(_bounds_rows_for(name, pipelines[name]))
    # The univariate LR is bounded, so the SLR must be too (within KDE noise).
    bound_m = math.log(uni.max_lr_bound() * 1.1)
    for name in ("univariate_analytic", "univariate_kde"):
        max_slr = float(np.max(pipelines[name].samples.log_slr))
        rows.append(("slr_bounded." + name, "", "", max_slr, bound_m, 0.0, max_slr <= bound_m))
    path = os.path.join(out, "bounds_report.csv")
    write_csv(
        path,
        ["check", "hypothesis", "alpha", "empirical", "bound", "slack", "pass"],
        rows,
    )
    write_meta(
        path,
        {
            "study": "bounds",
            "seed": cfg.seed,
            "n_train": cfg.n_train,
            "n_eval": cfg.n_eval,
            "alpha_levels": list(ALPHA_LEVELS),
        },
    )
    return [path]


def run_kl_report(cfg: StudyConfig, pipelines: dict | None = None) -> list:
    """Score-space KL estimates against the closed-form raw-data divergences
    (the data-processing inequality, checked in both directions)."""
    out = _study_dir(cfg.out_dir, "kl")
    pipelines = dict(pipelines) if pipelines else {}
    if "univariate_analytic" not in pipelines:
        pipelines["univariate_analytic"] = build_univariate_pipeline(
            default_univariate(), cfg.n_eval, cfg.seed, DENSITY_ANALYTIC, purpose="univariate"
        )
    if "mvn" not in pipelines:
        pipelines["mvn"] = build_rf_pipeline(
            default_mvn(), cfg.n_train, cfg.n_eval, cfg.seed, cfg.threads
        )
    if "beta" not in pipelines:
        pipelines["beta"] = build_rf_pipeline(
            default_beta(), cfg.n_train, cfg.n_eval, cfg.seed, cfg.threads
        )
    models = {
        "univariate_analytic": default_univariate(),
        "mvn": default_mvn(),
        "beta": default_beta(),
    }
    rows = []
    for name, pipeline in (
        ("univariate_analytic", pipelines["univariate_analytic"]),
        ("mvn", pipelines["mvn"]),
        ("beta", pipelines["beta"]),
    ):
        for direction in (DIRECTION_P_TO_D, DIRECTION_D_TO_P):
            raw = kl_raw_exact(models[name], direction)
            if direction == DIRECTION_P_TO_D:
                est = kl_score_mc(
                    pipeline.scores_hp, pipeline.logdensity_hp, pipeline.logdensity_hd
                )
            else:
                est = kl_score_mc(
                    pipeline.scores_hd, pipeline.logdensity_hd, pipeline.logdensity_hp
                )
            within = est.value <= raw + 3.0 * est.std_error
            rows.append((name, direction, raw, est.value, est.std_error, within))
    path = os.path.join(out, "kl_report.csv")
    write_csv(
        path,
        ["family", "direction", "raw_kl", "score_kl", "std_error", "within_bound"],
        rows,
    )
    write_meta(
        path,
        {"study": "kl", "seed": cfg.seed, "n_train": cfg.n_train, "n_eval": cfg.n_eval},
    )
    return [path]


def run_all(
    seed: int = 42,
    out_dir: str = "out",
    n_train: int = 20_000,
    n_eval: int = 20_000,
    threads: int = 1,
    hist_n_per_hyp: int = 5000,
    bins_n_per_hyp: int = 100_000,
) -> list:
    """Run every study, sharing the expensive pipelines between the forest
    studies and the bounds/KL reports."""
    uni = default_univariate()
    written = []
    base = dict(seed=seed, out_dir=out_dir, n_train=n_train, n_eval=n_eval, threads=threads)
    cfg_uni = StudyConfig(model=uni, **base)
    written += run_contour_grid(cfg_uni)
    written += run_discrepancy_hist(cfg_uni, n_per_hyp=hist_n_per_hyp)
    written += run_bin_agreement(cfg_uni, n_per_hyp=bins_n_per_hyp)
    pipelines = {
        "univariate_analytic": build_univariate_pipeline(
            uni, n_eval, seed, DENSITY_ANALYTIC, purpose="univariate"
        ),
        "univariate_kde": build_univariate_pipeline(
            uni, n_eval, seed, DENSITY_KDE, purpose="univariate"
        ),
        "mvn": build_rf_pipeline(default_mvn(), n_train, n_eval, seed, threads),
        "beta": build_rf_pipeline(default_beta(), n_train, n_eval, seed, threads),
    }
    cfg_mvn = StudyConfig(
        model=default_mvn(), score_kind=SCORE_RF, density_kind=DENSITY_KDE, **base
    )
    written += run_rf_study(cfg_mvn, pipeline=pipelines["mvn"])
    cfg_beta = StudyConfig(
        model=default_beta(), score_kind=SCORE_RF, density_kind=DENSITY_KDE, **base
    )
    written += run_rf_study(cfg_beta, pipeline=pipelines["beta"])
    written += run_bounds_report(cfg_uni, pipelines=pipelines)
    written += run_kl_report(cfg_uni, pipelines=pipelines)
    return written
