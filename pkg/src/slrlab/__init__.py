"""slrlab: exact and score-based likelihood ratios for specific-source
evidence models, with seeded simulation studies of how the two compare."""

__version__ = "0.1.0"

from .binning import BinScale, bin_of, bin_of_log, default_scale, overall_agreement
from .bounds import (
    LabeledScoreSamples,
    check_markov_bounds,
    kl_beta_exact,
    kl_gaussian_exact,
    kl_score_mc,
    markov_lower_bound,
)
from .density import Kde, kde_fit, kde_logdensity, silverman_bandwidth, slr_from_kdes
from .forest import Forest, ForestParams, TrainingSet, rf_score, train_forest
from .models import (
    BetaVectorPairModel,
    EvidencePair,
    Hypothesis,
    MultivariateGaussianPairModel,
    UnivariateGaussianPairModel,
    log_lr_exact,
    model_from_config,
    sample_pair,
    validate_model,
)
from .scores import (
    AnalyticScoreModel,
    analytic_score_logdensity,
    analytic_slr,
    noncentral_chi2_logpdf,
    score_euclidean,
    score_squared_diff,
)

__all__ = [
    "__version__",
    "AnalyticScoreModel",
    "BetaVectorPairModel",
    "BinScale",
    "EvidencePair",
    "Forest",
    "ForestParams",
    "Hypothesis",
    "Kde",
    "LabeledScoreSamples",
    "MultivariateGaussianPairModel",
    "TrainingSet",
    "UnivariateGaussianPairModel",
    "analytic_score_logdensity",
    "analytic_slr",
    "bin_of",
    "bin_of_log",
    "check_markov_bounds",
    "default_scale",
    "kde_fit",
    "kde_logdensity",
    "kl_beta_exact",
    "kl_gaussian_exact",
    "kl_score_mc",
    "log_lr_exact",
    "markov_lower_bound",
    "model_from_config",
    "noncentral_chi2_logpdf",
    "overall_agreement",
    "rf_score",
    "sample_pair",
    "score_euclidean",
    "score_squared_diff",
    "silverman_bandwidth",
    "slr_from_kdes",
    "train_forest",
    "validate_model",
]
