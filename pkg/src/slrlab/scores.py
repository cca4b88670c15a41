"""Score functions and the closed-form score densities of the univariate model.

For the univariate Gaussian model with score s = (x - y)^2, the score is a
scaled chi-square with one degree of freedom under Hp and a scaled noncentral
chi-square under Hd.  This module evaluates those densities exactly in log
space, which gives an analytic score-based likelihood ratio to use as an
oracle for the estimated ones.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionMismatch, DomainError
from .models import EvidencePair, Hypothesis, UnivariateGaussianPairModel
from .numerics import LOG_2PI

# Relative term size at which the noncentral series is truncated, and the
# hard cap on the number of terms (desk-scale noncentralities stay far below it).
SERIES_RTOL = 1e-16
SERIES_MAX_TERMS = 10_000


def score_squared_diff(pair: EvidencePair) -> float:
    """(x - y)^2 for univariate evidence."""
    if pair.x.shape != (1,) or pair.y.shape != (1,):
        raise DimensionMismatch("squared-difference score requires univariate evidence")
    return float((pair.x[0] - pair.y[0]) ** 2)


def scores_squared_diff(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return (np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)) ** 2


def score_euclidean(pair: EvidencePair) -> float:
    """Euclidean distance between the two evidence vectors."""
    if pair.x.shape != pair.y.shape:
        raise DimensionMismatch("evidence vectors must have equal length")
    return float(np.linalg.norm(pair.x - pair.y))


def scores_euclidean(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionMismatch("evidence arrays must have equal shape")
    if x.ndim == 1:
        return np.abs(x - y)
    return np.sqrt(np.sum((x - y) ** 2, axis=1))


def _chi2_logpdf(t: np.ndarray, df: float) -> np.ndarray:
    half = 0.5 * df
    return (half - 1.0) * np.log(t) - 0.5 * t - half * math.log(2.0) - math.lgamma(half)


def noncentral_chi2_logpdf(t, lam: float):
    """Log density of the noncentral chi-square with 1 degree of freedom.

    Evaluated through the Poisson-mixture series
    sum_j e^{-lam/2} (lam/2)^j / j! * chi2_{1+2j}(t), truncated once a term
    drops below SERIES_RTOL of the running sum past the modal index.  lam = 0
    reduces exactly to the central chi-square density.  Accepts scalars or
    arrays of t.
    """
    scalar = np.isscalar(t)
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if np.any(t <= 0.0) or not np.all(np.isfinite(t)):
        raise DomainError("noncentral chi-square density requires t > 0")
    if lam < 0.0 or not math.isfinite(lam):
        raise DomainError("noncentrality must be finite and >= 0")

    if lam == 0.0:
        out = _chi2_logpdf(t, 1.0)
        return float(out[0]) if scalar else out

    log_half_lam = math.log(0.5 * lam)
    acc = np.full_like(t, -np.inf)
    prev_max = -np.inf
    j = 0
    while True:
        log_weight = -0.5 * lam + j * log_half_lam - math.lgamma(j + 1.0)
        term = log_weight + _chi2_logpdf(t, 1.0 + 2.0 * j)
        acc = np.logaddexp(acc, term)
        term_max = float(np.max(term - acc))
        # Stop only after the terms have started to decrease (the series is
        # unimodal in j), so the first omitted term bounds the tail.
        if term_max < math.log(SERIES_RTOL) and term_max < prev_max:
            break
        prev_max = term_max
        j += 1
        if j >= SERIES_MAX_TERMS:
            raise ConvergenceError(
                f"noncentral series exceeded {SERIES_MAX_TERMS} terms (lam={lam})"
            )
    return float(acc[0]) if scalar else acc


@dataclass(frozen=True)
class AnalyticScoreModel:
    """Scales and noncentrality of the squared-difference score law.

    Under Hp the score is scale_hp * chi2_1; under Hd it is
    scale_hd * chi2_1(noncentrality).
    """

    scale_hp: float
    scale_hd: float
    noncentrality: float

    def __post_init__(self):
        if not (0.0 < self.scale_hp <= self.scale_hd):
            raise DomainError("score scales must satisfy 0 < scale_hp <= scale_hd")
        if self.noncentrality < 0.0:
            raise DomainError("noncentrality must be >= 0")

    @classmethod
    def from_univariate(cls, model: UnivariateGaussianPairModel) -> "AnalyticScoreModel":
        v_p = 2.0 * model.sigma_w**2
        v_d = 2.0 * model.sigma_w**2 + model.sigma_b**2
        lam = (model.mu_x - model.mu_b) ** 2 / v_d
        return cls(scale_hp=v_p, scale_hd=v_d, noncentrality=lam)


def analytic_score_logdensity(m: AnalyticScoreModel, hypothesis: Hypothesis, s):
    """Exact log density of the score under one hypothesis (s > 0)."""
    scalar = np.isscalar(s)
    s = np.atleast_1d(np.asarray(s, dtype=np.float64))
    if np.any(s <= 0.0):
        raise DomainError("score density requires s > 0")
    if hypothesis is Hypothesis.Hp:
        out = _chi2_logpdf(s / m.scale_hp, 1.0) - math.log(m.scale_hp)
    else:
        out = noncentral_chi2_logpdf(s / m.scale_hd, m.noncentrality) - math.log(m.scale_hd)
    return float(out[0]) if scalar else out


def analytic_slr(m: AnalyticScoreModel, s):
    """Exact log SLR: log f_p(s) - log f_d(s) for s >= 0.

    Both densities diverge at the same t^{-1/2} rate as s -> 0, so s = 0
    returns the finite limit log sqrt(scale_hd/scale_hp) + noncentrality/2.
    """
    scalar = np.isscalar(s)
    s = np.atleast_1d(np.asarray(s, dtype=np.float64))
    if np.any(s < 0.0):
        raise DomainError("scores must be >= 0")
    limit = 0.5 * math.log(m.scale_hd / m.scale_hp) + 0.5 * m.noncentrality
    out = np.full_like(s, limit)
    pos = s > 0.0
    if np.any(pos):
        out[pos] = analytic_score_logdensity(m, Hypothesis.Hp, s[pos]) - analytic_score_logdensity(
            m, Hypothesis.Hd, s[pos]
        )
    return float(out[0]) if scalar else out
