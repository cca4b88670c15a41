"""Command-line front door.

Subcommands: contour, hist, bins, rf-study, bounds, kl, all.  Values come
from flags first, then the JSON config file, then built-in defaults (which
match the published study sizes).  Exit codes: 0 success, 1 configuration
error, 2 runtime error.
"""

import argparse
import json
import sys

from .errors import ConfigError, SlrLabError
from .experiments import (
    DENSITY_ANALYTIC,
    DENSITY_KDE,
    SCORE_RF,
    SCORE_SQUARED_DIFF,
    StudyConfig,
    default_mvn,
    default_univariate,
    run_all,
    run_bin_agreement,
    run_bounds_report,
    run_contour_grid,
    run_discrepancy_hist,
    run_kl_report,
    run_rf_study,
)
from .models import UnivariateGaussianPairModel, model_from_config

_MODEL_FIELDS = {
    "family", "mu_x", "mu_b", "sigma_w", "sigma_b",
    "Sigma_w", "Sigma_b", "alpha_x", "beta_x", "alpha_y", "beta_y", "d",
}
_STUDY_FIELDS = {"seed", "out", "n_train", "n_eval", "threads", "score", "density"}

DEFAULTS = {"seed": 42, "out": "out", "n_train": 20_000, "n_eval": 20_000, "threads": 4}

# Per-hypothesis sample counts of the published studies, used unless the
# evaluation size is overridden explicitly.
HIST_N_PER_HYP = 5000
BINS_N_PER_HYP = 100_000


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"config file {path} must contain a JSON object")
    unknown = set(cfg) - _MODEL_FIELDS - _STUDY_FIELDS
    if unknown:
        raise ConfigError(f"unknown config field(s): {sorted(unknown)}")
    return cfg


def _effective(cfg: dict, key: str, flag_value):
    if flag_value is not None:
        return flag_value
    if key in cfg:
        return cfg[key]
    return DEFAULTS[key]


def _build_study_config(args, cfg: dict, default_model) -> StudyConfig:
    try:
        model = model_from_config(cfg) if "family" in cfg else default_model
    except SlrLabError as exc:
        raise ConfigError(f"invalid model configuration: {exc}") from None
    if isinstance(model, UnivariateGaussianPairModel):
        score_kind = cfg.get("score", SCORE_SQUARED_DIFF)
        density_kind = cfg.get("density", DENSITY_ANALYTIC)
    else:
        score_kind = cfg.get("score", SCORE_RF)
        density_kind = cfg.get("density", DENSITY_KDE)
    return StudyConfig(
        model=model,
        seed=int(_effective(cfg, "seed", args.seed)),
        out_dir=str(_effective(cfg, "out", args.out)),
        n_train=int(_effective(cfg, "n_train", args.n_train)),
        n_eval=int(_effective(cfg, "n_eval", args.n_eval)),
        score_kind=score_kind,
        density_kind=density_kind,
        threads=int(_effective(cfg, "threads", args.threads)),
    )


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slr-lab",
        description="Likelihood-ratio vs score-based likelihood-ratio simulation studies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("contour", "exact log LR / log SLR over an (x, y) grid"),
        ("hist", "discrepancy histograms of log SLR - log LR"),
        ("bins", "bin-agreement heatmaps and overall agreement table"),
        ("rf-study", "random-forest score study (histograms, scatter, bound table)"),
        ("bounds", "empirical inequality suite across model families"),
        ("kl", "score-space KL divergences vs closed-form raw-data values"),
        ("all", "run every study"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH", help="JSON config file")
        p.add_argument("--seed", type=int, metavar="U64", help="master seed")
        p.add_argument("--out", metavar="DIR", help="output directory")
        p.add_argument("--threads", type=int, metavar="N", help="worker cap (results unchanged)")
        p.add_argument("--n-train", type=int, metavar="N", dest="n_train", help="training pairs")
        p.add_argument("--n-eval", type=int, metavar="N", dest="n_eval", help="evaluation pairs")
    return parser


def _dispatch(args) -> list:
    cfg = _load_config(args.config)
    n_eval_overridden = args.n_eval is not None or "n_eval" in cfg
    study = _build_study_config(args, cfg, default_univariate())
    hist_n = study.n_eval // 2 if n_eval_overridden else HIST_N_PER_HYP
    bins_n = study.n_eval // 2 if n_eval_overridden else BINS_N_PER_HYP
    if args.command in ("contour", "hist") and not isinstance(
        study.model, UnivariateGaussianPairModel
    ):
        raise ConfigError(f"{args.command} requires a univariate_gaussian model")
    if args.command == "contour":
        return run_contour_grid(study)
    if args.command == "hist":
        return run_discrepancy_hist(study, n_per_hyp=hist_n)
    if args.command == "bins":
        return run_bin_agreement(study, n_per_hyp=bins_n)
    if args.command == "rf-study":
        study = _build_study_config(args, cfg, default_mvn())
        if isinstance(study.model, UnivariateGaussianPairModel):
            raise ConfigError("rf-study requires an mvn or beta model")
        return run_rf_study(study)
    if args.command == "bounds":
        return run_bounds_report(study)
    if args.command == "kl":
        return run_kl_report(study)
    if args.command == "all":
        return run_all(
            seed=study.seed,
            out_dir=study.out_dir,
            n_train=study.n_train,
            n_eval=study.n_eval,
            threads=study.threads,
            hist_n_per_hyp=hist_n,
            bins_n_per_hyp=bins_n,
        )
    raise ConfigError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        written = _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except SlrLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
