"""Empirical checks of the probabilistic bounds relating LRs to SLRs, and
closed-form Kullback-Leibler divergences for the raw-data models.

The central guarantees being exercised: under Hp the LR falls below SLR/alpha
with probability at most 1/alpha, and under Hd it exceeds alpha*SLR with
probability at most 1/alpha; conditional on the score, the SLR is sandwiched
between E[LR^-1 | s, Hd]^-1 and E[LR | s, Hp]; and the KL divergence between
the score distributions never exceeds the raw-data KL divergence.  All LR
aggregation happens in log space because exact LRs reach magnitudes like
1e-40 in these models.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptyInput, NonPositiveShape
from .models import (
    BetaVectorPairModel,
    Hypothesis,
    MultivariateGaussianPairModel,
    UnivariateGaussianPairModel,
)
from .numerics import digamma, log_beta, logmeanexp

DIRECTION_P_TO_D = "p_to_d"
DIRECTION_D_TO_P = "d_to_p"


@dataclass(frozen=True)
class LabeledScoreSamples:
    """Columnar (score, log LR, log SLR, hypothesis) samples; hypothesis is
    1 for Hp rows and 0 for Hd rows."""

    scores: np.ndarray
    log_lr: np.ndarray
    log_slr: np.ndarray
    hypothesis: np.ndarray

    def __post_init__(self):
        for name in ("scores", "log_lr", "log_slr"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            object.__setattr__(self, name, arr)
            if not np.all(np.isfinite(arr)):
                raise DomainError(f"{name} must be finite")
        hyp = np.asarray(self.hypothesis, dtype=np.int64)
        object.__setattr__(self, "hypothesis", hyp)
        n = self.scores.size
        if self.log_lr.size != n or self.log_slr.size != n or hyp.size != n:
            raise DomainError("sample columns must have equal length")

    @property
    def n(self) -> int:
        return self.scores.size

    def under(self, h: Hypothesis) -> "LabeledScoreSamples":
        mask = self.hypothesis == (1 if h is Hypothesis.Hp else 0)
        return LabeledScoreSamples(
            scores=self.scores[mask],
            log_lr=self.log_lr[mask],
            log_slr=self.log_slr[mask],
            hypothesis=self.hypothesis[mask],
        )


@dataclass(frozen=True)
class BoundQuery:
    alpha: float
    beta_threshold: float | None = None

    def __post_init__(self):
        if not self.alpha > 1.0:
            raise DomainError(f"alpha must be > 1, got {self.alpha}")
        if self.beta_threshold is not None and not self.beta_threshold > 0.0:
            raise DomainError("beta_threshold must be > 0")


def markov_lower_bound(alpha: float) -> float:
    """1 - 1/alpha, the guaranteed probability level for the Markov bounds."""
    if not alpha > 1.0:
        raise DomainError(f"alpha must be > 1, got {alpha}")
    return 1.0 - 1.0 / alpha


@dataclass(frozen=True)
class MarkovCheck:
    alpha: float
    bound: float
    p_hp: float
    p_hd: float
    n_hp: int
    n_hd: int
    slack_hp: float
    slack_hd: float
    satisfied_hp: bool
    satisfied_hd: bool


def _mc_slack(p: float, n: int) -> float:
    return 3.0 * math.sqrt(p * (1.0 - p) / n)


def check_markov_bounds(samples: LabeledScoreSamples, alpha: float) -> MarkovCheck:
    """Empirical frequencies of the two Markov-type bounds at level alpha:
    P(log LR >= log SLR - log alpha | Hp) and
    P(log LR <= log SLR + log alpha | Hd), each compared against 1 - 1/alpha
    minus a three-standard-error Monte Carlo slack."""
    bound = markov_lower_bound(alpha)
    log_alpha = math.log(alpha)
    hp = samples.under(Hypothesis.Hp)
    hd = samples.under(Hypothesis.Hd)
    if hp.n == 0 or hd.n == 0:
        raise EmptyInput("need samples under both hypotheses")
    p_hp = float(np.mean(hp.log_lr >= hp.log_slr - log_alpha))
    p_hd = float(np.mean(hd.log_lr <= hd.log_slr + log_alpha))
    slack_hp = _mc_slack(p_hp, hp.n)
    slack_hd = _mc_slack(p_hd, hd.n)
    return MarkovCheck(
        alpha=alpha,
        bound=bound,
        p_hp=p_hp,
        p_hd=p_hd,
        n_hp=hp.n,
        n_hd=hd.n,
        slack_hp=slack_hp,
        slack_hd=slack_hd,
        satisfied_hp=p_hp >= bound - slack_hp,
        satisfied_hd=p_hd >= bound - slack_hd,
    )


TRANSFORM_LR = "lr"
TRANSFORM_INV_LR = "inv_lr"


@dataclass(frozen=True)
class ScoreBinMeans:
    """Per-bin conditional means of LR (or 1/LR) given the score."""

    edges: np.ndarray
    counts: np.ndarray
    log_mean: np.ndarray  # log E[transform | score bin]; nan for empty bins
    mean_log_slr: np.ndarray  # bin-center log SLR; nan for empty bins
    transform: str


def conditional_mean_by_score_bin(
    samples: LabeledScoreSamples,
    hypothesis: Hypothesis,
    n_bins: int = 50,
    transform: str = TRANSFORM_LR,
) -> ScoreBinMeans:
    """Equal-count score bins over the samples of one hypothesis, with the
    per-bin mean of LR (transform='lr') or LR^-1 (transform='inv_lr')
    aggregated by log-sum-exp.  Empty bins are marked undefined (nan)."""
    if transform not in (TRANSFORM_LR, TRANSFORM_INV_LR):
        raise DomainError(f"unknown transform {transform!r}")
    if n_bins < 1:
        raise DomainError("n_bins must be >= 1")
    sub = samples.under(hypothesis)
    if sub.n == 0:
        raise EmptyInput(f"no samples under {hypothesis}")
    edges = np.quantile(sub.scores, np.linspace(0.0, 1.0, n_bins + 1))
    edges[0] = -np.inf
    edges[-1] = np.inf
    which = np.clip(np.searchsorted(edges, sub.scores, side="right") - 1, 0, n_bins - 1)
    sign = 1.0 if transform == TRANSFORM_LR else -1.0
    counts = np.zeros(n_bins, dtype=np.int64)
    log_mean = np.full(n_bins, np.nan)
    mean_log_slr = np.full(n_bins, np.nan)
    for b in range(n_bins):
        mask = which == b
        counts[b] = int(mask.sum())
        if counts[b] == 0:
            continue
        log_mean[b] = logmeanexp(sign * sub.log_lr[mask])
        mean_log_slr[b] = float(np.mean(sub.log_slr[mask]))
    return ScoreBinMeans(
        edges=edges, counts=counts, log_mean=log_mean, mean_log_slr=mean_log_slr,
        transform=transform,
    )


@dataclass(frozen=True)
class CauchyBound:
    probability: float
    jensen_violation: bool


def cauchy_bound_value(
    log_slr: float, log_cond_mean: float, alpha: float, side: str
) -> CauchyBound:
    """Cauchy-Schwarz bound value (1 - 1/alpha)^2 * ratio, clamped to [0, 1].

    side='hp': ratio = SLR^-1 / E[LR^-1 | s, Hd], so log_cond_mean is the log
    of that conditional mean; side='hd': ratio = SLR / E[LR | s, Hp].  The
    ratio exceeding 1 contradicts Jensen's inequality up to estimation noise,
    so it is clamped and flagged."""
    if side not in ("hp", "hd"):
        raise DomainError(f"side must be 'hp' or 'hd', got {side!r}")
    if not alpha > 1.0:
        raise DomainError(f"alpha must be > 1, got {alpha}")
    if not (np.isfinite(log_slr) and np.isfinite(log_cond_mean)):
        raise DomainError("log inputs must be finite")
    if side == "hp":
        log_ratio = -log_slr - log_cond_mean
    else:
        log_ratio = log_slr - log_cond_mean
    jensen_violation = log_ratio > 0.0
    ratio = math.exp(min(log_ratio, 0.0))
    value = (1.0 - 1.0 / alpha) ** 2 * ratio
    return CauchyBound(probability=min(max(value, 0.0), 1.0), jensen_violation=jensen_violation)


def tail_product_bound(samples: LabeledScoreSamples, beta_threshold: float) -> float:
    """Empirical P(SLR > beta | Hd): an upper bound, valid for every alpha,
    on the probability that the LR undershoots SLR/alpha while the SLR is
    large under Hd."""
    if not beta_threshold > 0.0:
        raise DomainError("beta_threshold must be > 0")
    hd = samples.under(Hypothesis.Hd)
    if hd.n == 0:
        raise EmptyInput("no Hd samples")
    return float(np.mean(hd.log_slr > math.log(beta_threshold)))


# ---------------------------------------------------------------------------
# Closed-form raw-data KL divergences.
# ---------------------------------------------------------------------------


def _gaussian_kl_univariate(mu_a, var_a, mu_b, var_b) -> float:
    return 0.5 * math.log(var_b / var_a) + (var_a + (mu_a - mu_b) ** 2) / (2.0 * var_b) - 0.5


def kl_gaussian_exact(
    model: UnivariateGaussianPairModel | MultivariateGaussianPairModel,
    direction: str = DIRECTION_P_TO_D,
) -> float:
    """KL divergence between the unknown-source laws p(y|Hp) and p(y|Hd)."""
    if direction not in (DIRECTION_P_TO_D, DIRECTION_D_TO_P):
        raise DomainError(f"unknown direction {direction!r}")
    if isinstance(model, UnivariateGaussianPairModel):
        vp = model.sigma_w**2
        vd = model.hd_var
        if direction == DIRECTION_P_TO_D:
            return _gaussian_kl_univariate(model.mu_x, vp, model.mu_b, vd)
        return _gaussian_kl_univariate(model.mu_b, vd, model.mu_x, vp)
    d = model.dim
    cov_p = model.cov_w
    cov_d = model.cov_w + model.cov_b
    if direction == DIRECTION_P_TO_D:
        mu_a, cov_a, mu_b_, cov_b_, chol_b = model.mu_x, cov_p, model.mu_b, cov_d, model.chol_wb
        logdet = model.logdet_wb - model.logdet_w
    else:
        mu_a, cov_a, mu_b_, cov_b_, chol_b = model.mu_b, cov_d, model.mu_x, cov_p, model.chol_w
        logdet = model.logdet_w - model.logdet_wb
    z = np.linalg.solve(chol_b, (mu_a - mu_b_))
    quad = float(z @ z)
    trace = float(np.trace(np.linalg.solve(cov_b_, cov_a)))
    return 0.5 * (trace + quad - d + logdet)


def _beta_kl_single(a1: float, b1: float, a2: float, b2: float) -> float:
    return (
        log_beta(a2, b2)
        - log_beta(a1, b1)
        + (a1 - a2) * digamma(a1)
        + (b1 - b2) * digamma(b1)
        + (a2 - a1 + b2 - b1) * digamma(a1 + b1)
    )


def kl_beta_exact(model: BetaVectorPairModel, direction: str = DIRECTION_P_TO_D) -> float:
    """KL divergence between the iid Beta-vector laws (dim times the
    single-coordinate divergence)."""
    if direction not in (DIRECTION_P_TO_D, DIRECTION_D_TO_P):
        raise DomainError(f"unknown direction {direction!r}")
    for value in (model.alpha_x, model.beta_x, model.alpha_y, model.beta_y):
        if value <= 0:
            raise NonPositiveShape("shape parameters must be positive")
    if direction == DIRECTION_P_TO_D:
        per = _beta_kl_single(model.alpha_x, model.beta_x, model.alpha_y, model.beta_y)
    else:
        per = _beta_kl_single(model.alpha_y, model.beta_y, model.alpha_x, model.beta_x)
    return model.dim * per


def kl_raw_exact(model, direction: str = DIRECTION_P_TO_D) -> float:
    if isinstance(model, BetaVectorPairModel):
        return kl_beta_exact(model, direction)
    return kl_gaussian_exact(model, direction)


@dataclass(frozen=True)
class KlEstimate:
    value: float
    std_error: float
    flagged_negative: bool


def kl_score_mc(
    scores_under_a: np.ndarray, logdensity_a, logdensity_b
) -> KlEstimate:
    """Monte Carlo estimate of the score-space KL divergence D(f_a || f_b)
    from scores sampled under the first law: the mean of
    log f_a(s) - log f_b(s) with its standard error.  Slightly negative
    estimates within 3 standard errors are estimator noise; anything more
    negative is flagged."""
    scores_under_a = np.asarray(scores_under_a, dtype=np.float64)
    if scores_under_a.size == 0:
        raise EmptyInput("no scores")
    diffs = np.asarray(logdensity_a(scores_under_a)) - np.asarray(
        logdensity_b(scores_under_a)
    )
    value = float(np.mean(diffs))
    se = float(np.std(diffs, ddof=1) / math.sqrt(diffs.size)) if diffs.size > 1 else math.inf
    return KlEstimate(value=value, std_error=se, flagged_negative=value < -3.0 * se)
