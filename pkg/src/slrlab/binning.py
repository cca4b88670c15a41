"""Decade bins for likelihood-ratio values and LR/SLR bin agreement.

The default scale splits the positive axis into ten half-open intervals
(a, b] with boundaries 10^-4 ... 10^4; the five bins above 1 carry the
conventional verbal strength labels.  Binning is done on log values so that
ratios far below the smallest positive double still land in the bottom bin.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EmptyInput
from .models import Hypothesis

EVETT_LABELS = ("Limited", "Moderate", "Moderately strong", "Strong", "Very strong")


@dataclass(frozen=True)
class BinScale:
    """Ordered interior boundaries; bin k is (b[k-1], b[k]], with bin 0 equal
    to (0, b[0]] and the last bin (b[-1], inf)."""

    boundaries: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        bounds = np.asarray(self.boundaries, dtype=np.float64)
        if np.any(bounds <= 0.0) or np.any(np.diff(bounds) <= 0.0):
            raise DomainError("boundaries must be positive and strictly increasing")
        object.__setattr__(self, "boundaries", bounds)
        object.__setattr__(self, "_log_bounds", np.log(bounds))

    @property
    def n_bins(self) -> int:
        return len(self.boundaries) + 1

    def label(self, bin_index: int) -> str | None:
        """Verbal label for bins above 1 on the default scale."""
        offset = bin_index - (self.n_bins - len(self.labels))
        if 0 <= offset < len(self.labels):
            return self.labels[offset]
        return None


def default_scale() -> BinScale:
    return BinScale(boundaries=10.0 ** np.arange(-4.0, 5.0), labels=EVETT_LABELS)


def bin_of(value: float, scale: BinScale) -> int:
    """Bin index of a positive value; boundary values fall in the lower
    interval (right-closed convention, e.g. 10 is in (1, 10])."""
    if not np.isfinite(value) or value <= 0.0:
        raise DomainError(f"binning requires a positive finite value, got {value}")
    return int(np.searchsorted(scale.boundaries, value, side="left"))


def bin_of_log(log_value, scale: BinScale):
    """Vectorized bin index from log values (handles ratios whose plain value
    would underflow).  Accepts scalars or arrays."""
    log_value = np.asarray(log_value, dtype=np.float64)
    if not np.all(np.isfinite(log_value)):
        raise DomainError("binning requires finite log values")
    return np.searchsorted(scale._log_bounds, log_value, side="left")


@dataclass(frozen=True)
class AgreementMatrix:
    """Empirical P(LR bin = column | SLR bin = row, hypothesis), one matrix
    per hypothesis; rows with no SLR observations are flagged undefined."""

    probs: dict
    counts: dict
    row_defined: dict
    n_bins: int = field(default=10)


def _require_samples(samples) -> None:
    if samples.n == 0:
        raise EmptyInput("no samples")
    for h in Hypothesis:
        if not np.any(samples.hypothesis == (1 if h is Hypothesis.Hp else 0)):
            raise EmptyInput(f"no samples under {h}")


def agreement_matrix(samples, scale: BinScale) -> AgreementMatrix:
    """Conditional bin-agreement frequencies by hypothesis."""
    _require_samples(samples)
    nb = scale.n_bins
    probs, counts, defined = {}, {}, {}
    for h in Hypothesis:
        mask = samples.hypothesis == (1 if h is Hypothesis.Hp else 0)
        slr_bins = bin_of_log(samples.log_slr[mask], scale)
        lr_bins = bin_of_log(samples.log_lr[mask], scale)
        joint = np.zeros((nb, nb), dtype=np.int64)
        np.add.at(joint, (slr_bins, lr_bins), 1)
        row_totals = joint.sum(axis=1)
        has_rows = row_totals > 0
        prob = np.full((nb, nb), np.nan)
        prob[has_rows] = joint[has_rows] / row_totals[has_rows, None]
        probs[h] = prob
        counts[h] = joint
        defined[h] = has_rows
    return AgreementMatrix(probs=probs, counts=counts, row_defined=defined, n_bins=nb)


def overall_agreement(samples, scale: BinScale) -> dict:
    """sum_B P(LR in B | SLR in B, H) P(SLR in B | H), computed empirically;
    algebraically equal to the plain frequency of bin agreement."""
    _require_samples(samples)
    out = {}
    for h in Hypothesis:
        mask = samples.hypothesis == (1 if h is Hypothesis.Hp else 0)
        slr_bins = bin_of_log(samples.log_slr[mask], scale)
        lr_bins = bin_of_log(samples.log_lr[mask], scale)
        out[h] = float(np.mean(slr_bins == lr_bins))
    return out


def write_agreement_csv(matrix: AgreementMatrix, path) -> None:
    """Rows: hypothesis, slr_bin, lr_bin, probability, count (undefined SLR
    rows omitted, mirroring blank heatmap cells)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["hypothesis", "slr_bin", "lr_bin", "probability", "count"])
        for h in Hypothesis:
            prob = matrix.probs[h]
            count = matrix.counts[h]
            for i in range(matrix.n_bins):
                if not matrix.row_defined[h][i]:
                    continue
                for j in range(matrix.n_bins):
                    writer.writerow(
                        [h.value, i, j, repr(float(prob[i, j])), int(count[i, j])]
                    )
