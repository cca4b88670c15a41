"""Gaussian-kernel density estimation for score distributions.

Two supports are available: the real line (distance-type scores) and the
unit interval with boundary reflection about 0 and 1 (classifier scores,
which pile up near the endpoints).  Log densities are floored at LOG_FLOOR
so density ratios stay finite everywhere.  The kernel sum is exact per
query (no binning or FFT approximation); queries are batched through the
kernels in :mod:`slrlab.kernels`.
"""

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSample, DomainError, SupportMismatch
from .kernels import kde_logdensity_kernel

LOG_FLOOR = -690.0  # just inside log of the smallest positive normal double

SUPPORT_REAL_LINE = "real_line"
SUPPORT_UNIT = "unit"
_SUPPORTS = (SUPPORT_REAL_LINE, SUPPORT_UNIT)


def silverman_bandwidth(points: np.ndarray) -> float:
    """0.9 * min(sd, IQR/1.34) * n^(-1/5); falls back to sd when the IQR is
    zero and raises DegenerateSample when the sample has no spread at all."""
    points = np.asarray(points, dtype=np.float64)
    n = points.size
    if n < 2:
        raise DegenerateSample("bandwidth selection needs at least 2 points")
    sd = float(points.std(ddof=1))
    if sd == 0.0:
        raise DegenerateSample("all points are equal")
    q75, q25 = np.percentile(points, [75.0, 25.0])
    iqr = float(q75 - q25)
    spread = min(sd, iqr / 1.34) if iqr > 0.0 else sd
    return 0.9 * spread * n ** (-0.2)


@dataclass(frozen=True)
class Kde:
    points: np.ndarray
    bandwidth: float
    support: str
    log_floor: float = LOG_FLOOR
    # Sorted fit points plus boundary reflections for the unit support.
    _augmented: np.ndarray = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return self.points.size


def kde_fit(points, support: str = SUPPORT_REAL_LINE, bandwidth: float | None = None) -> Kde:
    """Fit a Gaussian-kernel density to a score sample."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    if support not in _SUPPORTS:
        raise DomainError(f"support must be one of {_SUPPORTS}, got {support!r}")
    if support == SUPPORT_UNIT and (np.any(points < 0.0) or np.any(points > 1.0)):
        raise DomainError("unit-support KDE requires points in [0, 1]")
    if points.size < 2 or np.all(points == points[0]):
        raise DegenerateSample("KDE fitting needs at least 2 distinct points")
    if bandwidth is None:
        bandwidth = silverman_bandwidth(points)
    elif bandwidth <= 0.0:
        raise DomainError(f"bandwidth must be > 0, got {bandwidth}")
    if support == SUPPORT_UNIT:
        augmented = np.concatenate([points, -points, 2.0 - points])
    else:
        augmented = points
    augmented = np.sort(augmented)
    return Kde(
        points=points,
        bandwidth=float(bandwidth),
        support=support,
        _augmented=augmented,
    )


def kde_logdensity_batch(kde: Kde, s: np.ndarray) -> np.ndarray:
    """Floored log density at each query point (never -inf)."""
    s = np.atleast_1d(np.asarray(s, dtype=np.float64))
    return kde_logdensity_kernel(kde._augmented, kde.n, kde.bandwidth, s, kde.log_floor)


def kde_logdensity(kde: Kde, s: float) -> float:
    return float(kde_logdensity_batch(kde, np.array([s]))[0])


def slr_from_kdes_batch(kde_p: Kde, kde_d: Kde, s: np.ndarray) -> np.ndarray:
    """log f_p(s) - log f_d(s) from the two fitted densities."""
    if kde_p.support != kde_d.support:
        raise SupportMismatch(
            f"KDE supports differ: {kde_p.support!r} vs {kde_d.support!r}"
        )
    return kde_logdensity_batch(kde_p, s) - kde_logdensity_batch(kde_d, s)


def slr_from_kdes(kde_p: Kde, kde_d: Kde, s: float) -> float:
    return float(slr_from_kdes_batch(kde_p, kde_d, np.array([s]))[0])


def kde_integral(kde: Kde, n_grid: int = 2001) -> float:
    """Trapezoid integral of the fitted density over its support (the data
    range padded by 5 bandwidths for the real line, [0, 1] for the unit
    interval).  Used by normalization checks."""
    if kde.support == SUPPORT_UNIT:
        grid = np.linspace(0.0, 1.0, n_grid)
    else:
        lo = kde.points.min() - 5.0 * kde.bandwidth
        hi = kde.points.max() + 5.0 * kde.bandwidth
        grid = np.linspace(lo, hi, n_grid)
    dens = np.exp(kde_logdensity_batch(kde, grid))
    return float(np.trapezoid(dens, grid))


def kde_dump(kde: Kde, csv_path, meta_path) -> None:
    """Write the fit points as CSV plus a JSON header (bandwidth, support,
    floor) for plotting scripts."""
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["point"])
        for p in kde.points:
            writer.writerow([repr(float(p))])
    meta = {
        "bandwidth": kde.bandwidth,
        "support": kde.support,
        "log_floor": kde.log_floor,
        "n": int(kde.n),
    }
    with open(meta_path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
