"""Specific-source generative models for evidence pairs.

Each model describes the joint law of a known-source measurement X and an
unknown-source measurement Y under two hypotheses: under Hp both come from
the known source's distribution, under Hd the unknown-source measurement
comes from an alternative distribution.  X and Y are always independent and
X has the same distribution under both hypotheses, so the exact likelihood
ratio depends on y only.
"""

import enum
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    NonPositiveShape,
    NonPositiveVariance,
    NotPositiveDefinite,
)
from .numerics import LOG_2PI, log_beta


class Hypothesis(enum.Enum):
    Hp = "Hp"
    Hd = "Hd"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EvidencePair:
    """One realization (x, y) of known- and unknown-source evidence."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.atleast_1d(np.asarray(self.x, dtype=np.float64)))
        object.__setattr__(self, "y", np.atleast_1d(np.asarray(self.y, dtype=np.float64)))


@dataclass(frozen=True)
class UnivariateGaussianPairModel:
    """X ~ N(mu_x, sigma_w^2); under Hp Y is the same, under Hd
    Y ~ N(mu_b, sigma_w^2 + sigma_b^2)."""

    mu_x: float
    mu_b: float
    sigma_w: float
    sigma_b: float

    def __post_init__(self):
        validate_model(self)

    @property
    def dim(self) -> int:
        return 1

    @property
    def hd_var(self) -> float:
        return self.sigma_w**2 + self.sigma_b**2

    def max_lr_bound(self) -> float:
        """Supremum of the exact LR over y (finite because the Hd variance
        dominates the Hp variance).  Maximized at the stationary point of the
        log ratio of the two Gaussian densities."""
        vp = self.sigma_w**2
        vd = self.hd_var
        if vd == vp:
            # Equal variances: the LR is constant when the means agree and
            # unbounded otherwise.
            return 1.0 if self.mu_x == self.mu_b else math.inf
        y_star = (self.mu_x * vd - self.mu_b * vp) / (vd - vp)
        return float(np.exp(log_lr_batch(self, np.array([y_star]))[0]))


@dataclass(frozen=True)
class MultivariateGaussianPairModel:
    """d-dimensional analogue with within-source covariance cov_w and
    between-source covariance cov_b (Hd covariance is cov_w + cov_b)."""

    mu_x: np.ndarray
    mu_b: np.ndarray
    cov_w: np.ndarray
    cov_b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mu_x", np.asarray(self.mu_x, dtype=np.float64))
        object.__setattr__(self, "mu_b", np.asarray(self.mu_b, dtype=np.float64))
        object.__setattr__(self, "cov_w", np.asarray(self.cov_w, dtype=np.float64))
        object.__setattr__(self, "cov_b", np.asarray(self.cov_b, dtype=np.float64))
        validate_model(self)

    @property
    def dim(self) -> int:
        return len(self.mu_x)

    @cached_property
    def chol_w(self) -> np.ndarray:
        return np.linalg.cholesky(self.cov_w)

    @cached_property
    def chol_wb(self) -> np.ndarray:
        return np.linalg.cholesky(self.cov_w + self.cov_b)

    @cached_property
    def logdet_w(self) -> float:
        return 2.0 * float(np.sum(np.log(np.diag(self.chol_w))))

    @cached_property
    def logdet_wb(self) -> float:
        return 2.0 * float(np.sum(np.log(np.diag(self.chol_wb))))


@dataclass(frozen=True)
class BetaVectorPairModel:
    """dim iid coordinates; under Hp Y_i ~ Beta(alpha_x, beta_x), under Hd
    Y_i ~ Beta(alpha_y, beta_y).  X_i ~ Beta(alpha_x, beta_x) always."""

    alpha_x: float
    beta_x: float
    alpha_y: float
    beta_y: float
    dim: int = 5

    def __post_init__(self):
        validate_model(self)


PairModel = UnivariateGaussianPairModel | MultivariateGaussianPairModel | BetaVectorPairModel


def _check_finite(name: str, value: np.ndarray | float) -> None:
    if not np.all(np.isfinite(value)):
        raise DomainError(f"{name} must be finite")


def validate_model(model: PairModel) -> None:
    """Raise the first violated invariant; return None when the model is valid."""
    if isinstance(model, UnivariateGaussianPairModel):
        for name in ("mu_x", "mu_b", "sigma_w", "sigma_b"):
            _check_finite(name, getattr(model, name))
        if model.sigma_w <= 0:
            raise NonPositiveVariance(f"sigma_w must be > 0, got {model.sigma_w}")
        # sigma_b = 0 is allowed: it is the degenerate between-source case,
        # mirroring the positive-semidefinite allowance for cov_b below.
        if model.sigma_b < 0:
            raise NonPositiveVariance(f"sigma_b must be >= 0, got {model.sigma_b}")
    elif isinstance(model, MultivariateGaussianPairModel):
        d = model.mu_x.shape[0]
        for name in ("mu_x", "mu_b", "cov_w", "cov_b"):
            _check_finite(name, getattr(model, name))
        if model.mu_b.shape != (d,):
            raise DimensionMismatch("mu_x and mu_b must have the same length")
        if model.cov_w.shape != (d, d) or model.cov_b.shape != (d, d):
            raise DimensionMismatch("covariance matrices must be d x d")
        if not np.allclose(model.cov_b, model.cov_b.T):
            raise NotPositiveDefinite("cov_b must be symmetric")
        if np.min(np.linalg.eigvalsh(model.cov_b)) < -1e-10:
            raise NotPositiveDefinite("cov_b must be positive semidefinite")
        for name, mat in (("cov_w", model.cov_w), ("cov_w + cov_b", model.cov_w + model.cov_b)):
            try:
                np.linalg.cholesky(mat)
            except np.linalg.LinAlgError:
                raise NotPositiveDefinite(f"{name} admits no Cholesky factorization") from None
    elif isinstance(model, BetaVectorPairModel):
        for name in ("alpha_x", "beta_x", "alpha_y", "beta_y"):
            value = getattr(model, name)
            _check_finite(name, value)
            if value <= 0:
                raise NonPositiveShape(f"{name} must be > 0, got {value}")
        if model.dim < 1:
            raise DimensionMismatch(f"dim must be >= 1, got {model.dim}")
    else:
        raise TypeError(f"unknown model type {type(model)!r}")


def _beta_draws(rng: np.random.Generator, a: float, b: float, size) -> np.ndarray:
    # Ratio-of-gammas construction: G_a / (G_a + G_b) ~ Beta(a, b).
    ga = rng.gamma(a, size=size)
    gb = rng.gamma(b, size=size)
    return ga / (ga + gb)


def sample_pairs(
    model: PairModel,
    hypothesis: Hypothesis,
    rng: np.random.Generator,
    n: int,
    hierarchical: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw n independent (x, y) pairs.  Returns (X, Y) with shape (n,) for
    the univariate model and (n, d) otherwise.

    Under Hd the unknown-source draw normally uses the marginal law directly;
    ``hierarchical=True`` selects the equivalent two-stage draw (random source
    mean, then a within-source draw) for validation purposes.
    """
    if isinstance(model, UnivariateGaussianPairModel):
        x = rng.normal(model.mu_x, model.sigma_w, n)
        if hypothesis is Hypothesis.Hp:
            y = rng.normal(model.mu_x, model.sigma_w, n)
        elif hierarchical:
            mu_y = rng.normal(model.mu_b, model.sigma_b, n)
            y = rng.normal(mu_y, model.sigma_w)
        else:
            y = rng.normal(model.mu_b, math.sqrt(model.hd_var), n)
        return x, y
    if isinstance(model, MultivariateGaussianPairModel):
        d = model.dim
        x = model.mu_x + rng.standard_normal((n, d)) @ model.chol_w.T
        if hypothesis is Hypothesis.Hp:
            y = model.mu_x + rng.standard_normal((n, d)) @ model.chol_w.T
        elif hierarchical:
            # cov_b may be singular (PSD), so factor it via eigh.
            vals, vecs = np.linalg.eigh(model.cov_b)
            factor = vecs * np.sqrt(np.clip(vals, 0.0, None))
            mu_y = model.mu_b + rng.standard_normal((n, d)) @ factor.T
            y = mu_y + rng.standard_normal((n, d)) @ model.chol_w.T
        else:
            y = model.mu_b + rng.standard_normal((n, d)) @ model.chol_wb.T
        return x, y
    if isinstance(model, BetaVectorPairModel):
        d = model.dim
        x = _beta_draws(rng, model.alpha_x, model.beta_x, (n, d))
        if hypothesis is Hypothesis.Hp:
            y = _beta_draws(rng, model.alpha_x, model.beta_x, (n, d))
        else:
            y = _beta_draws(rng, model.alpha_y, model.beta_y, (n, d))
        return x, y
    raise TypeError(f"unknown model type {type(model)!r}")


def sample_pair(
    model: PairModel, hypothesis: Hypothesis, rng: np.random.Generator
) -> EvidencePair:
    x, y = sample_pairs(model, hypothesis, rng, 1)
    return EvidencePair(x=x[0] if x.ndim == 2 else x, y=y[0] if y.ndim == 2 else y)


def _gaussian_logpdf(y: np.ndarray, mu: float, var: float) -> np.ndarray:
    return -0.5 * (LOG_2PI + math.log(var)) - (y - mu) ** 2 / (2.0 * var)


def _mvn_quad(y: np.ndarray, mu: np.ndarray, chol: np.ndarray) -> np.ndarray:
    # y: (n, d).  Solve L z = (y - mu)^T and return the squared norms.
    z = np.linalg.solve(chol, (y - mu).T)
    return np.sum(z * z, axis=0)


def _beta_logpdf(y: np.ndarray, a: float, b: float) -> np.ndarray:
    return (a - 1.0) * np.log(y) + (b - 1.0) * np.log1p(-y) - log_beta(a, b)


def log_lr_batch(model: PairModel, y: np.ndarray) -> np.ndarray:
    """Exact log likelihood ratio log p(y|Hp) - log p(y|Hd) for a batch of
    unknown-source values.  Computed entirely in log space."""
    y = np.asarray(y, dtype=np.float64)
    if isinstance(model, UnivariateGaussianPairModel):
        return _gaussian_logpdf(y, model.mu_x, model.sigma_w**2) - _gaussian_logpdf(
            y, model.mu_b, model.hd_var
        )
    if isinstance(model, MultivariateGaussianPairModel):
        if y.ndim == 1:
            y = y[None, :]
        if y.shape[1] != model.dim:
            raise DimensionMismatch(f"expected vectors of length {model.dim}")
        quad_p = _mvn_quad(y, model.mu_x, model.chol_w)
        quad_d = _mvn_quad(y, model.mu_b, model.chol_wb)
        return 0.5 * (model.logdet_wb - model.logdet_w) + 0.5 * (quad_d - quad_p)
    if isinstance(model, BetaVectorPairModel):
        if y.ndim == 1:
            y = y[None, :]
        if y.shape[1] != model.dim:
            raise DimensionMismatch(f"expected vectors of length {model.dim}")
        if np.any(y <= 0.0) or np.any(y >= 1.0):
            raise DomainError("Beta evidence coordinates must lie in (0, 1)")
        per_coord = _beta_logpdf(y, model.alpha_x, model.beta_x) - _beta_logpdf(
            y, model.alpha_y, model.beta_y
        )
        return np.sum(per_coord, axis=1)
    raise TypeError(f"unknown model type {type(model)!r}")


def log_lr_exact(model: PairModel, pair: EvidencePair) -> float:
    """Exact log LR for one evidence pair (the value depends on y only)."""
    if isinstance(model, UnivariateGaussianPairModel):
        if pair.y.shape != (1,) or pair.x.shape != (1,):
            raise DimensionMismatch("univariate pairs must have length-1 vectors")
        return float(log_lr_batch(model, pair.y)[0])
    out = log_lr_batch(model, pair.y[None, :])
    return float(out[0])


_FAMILY_NAMES = {
    "univariate_gaussian": UnivariateGaussianPairModel,
    "mvn": MultivariateGaussianPairModel,
    "beta": BetaVectorPairModel,
}


def model_from_config(cfg: dict) -> PairModel:
    """Build a model from a parsed JSON configuration.

    Recognized fields: family ("univariate_gaussian" | "mvn" | "beta"),
    mu_x, mu_b, sigma_w, sigma_b, Sigma_w, Sigma_b, alpha_x, beta_x,
    alpha_y, beta_y, d.
    """
    family = cfg.get("family")
    if family not in _FAMILY_NAMES:
        raise DomainError(
            f"family must be one of {sorted(_FAMILY_NAMES)}, got {family!r}"
        )
    try:
        if family == "univariate_gaussian":
            return UnivariateGaussianPairModel(
                mu_x=float(cfg["mu_x"]),
                mu_b=float(cfg["mu_b"]),
                sigma_w=float(cfg["sigma_w"]),
                sigma_b=float(cfg["sigma_b"]),
            )
        if family == "mvn":
            d = int(cfg["d"])
            mu_x = np.broadcast_to(np.asarray(cfg["mu_x"], dtype=np.float64), (d,))
            mu_b = np.broadcast_to(np.asarray(cfg["mu_b"], dtype=np.float64), (d,))
            cov_w = _matrix_from_config(cfg["Sigma_w"], d)
            cov_b = _matrix_from_config(cfg["Sigma_b"], d)
            return MultivariateGaussianPairModel(mu_x=mu_x, mu_b=mu_b, cov_w=cov_w, cov_b=cov_b)
        return BetaVectorPairModel(
            alpha_x=float(cfg["alpha_x"]),
            beta_x=float(cfg["beta_x"]),
            alpha_y=float(cfg["alpha_y"]),
            beta_y=float(cfg["beta_y"]),
            dim=int(cfg["d"]),
        )
    except KeyError as exc:
        raise DomainError(f"missing model field {exc.args[0]!r} for family {family!r}") from None


def _matrix_from_config(value, d: int) -> np.ndarray:
    """Accept a scalar (multiple of the identity) or a full d x d matrix."""
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim == 0:
        return float(arr) * np.eye(d)
    if arr.shape != (d, d):
        raise DimensionMismatch(f"covariance must be scalar or {d}x{d}, got shape {arr.shape}")
    return arr
