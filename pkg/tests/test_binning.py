import math

import numpy as np
import pytest

from slrlab.binning import (
    AgreementMatrix,
    BinScale,
    agreement_matrix,
    bin_of,
    bin_of_log,
    default_scale,
    overall_agreement,
    write_agreement_csv,
)
from slrlab.bounds import LabeledScoreSamples
from slrlab.errors import DomainError, EmptyInput
from slrlab.experiments import DENSITY_ANALYTIC, TABLE1_SETTINGS, build_univariate_pipeline
from slrlab.models import Hypothesis, UnivariateGaussianPairModel


def make_samples(log_lr, log_slr, hypothesis):
    log_lr = np.asarray(log_lr, dtype=np.float64)
    return LabeledScoreSamples(
        scores=np.zeros_like(log_lr),
        log_lr=log_lr,
        log_slr=np.asarray(log_slr, dtype=np.float64),
        hypothesis=np.asarray(hypothesis, dtype=np.int64),
    )


class TestBinScale:
    def test_default_scale_shape(self):
        scale = default_scale()
        assert scale.n_bins == 10
        assert scale.boundaries[0] == 1e-4 and scale.boundaries[-1] == 1e4

    def test_labels_attach_to_upper_bins(self):
        scale = default_scale()
        assert scale.label(5) == "Limited"
        assert scale.label(6) == "Moderate"
        assert scale.label(7) == "Moderately strong"
        assert scale.label(8) == "Strong"
        assert scale.label(9) == "Very strong"
        assert scale.label(4) is None
        assert scale.label(0) is None

    def test_decreasing_boundaries_rejected(self):
        with pytest.raises(DomainError):
            BinScale(boundaries=np.array([1.0, 0.5]))

    def test_nonpositive_boundary_rejected(self):
        with pytest.raises(DomainError):
            BinScale(boundaries=np.array([-1.0, 1.0]))


class TestBinOf:
    def test_limited_bin(self):
        scale = default_scale()
        idx = bin_of(5.0, scale)
        assert idx == 5
        assert scale.label(idx) == "Limited"

    def test_below_lowest_boundary(self):
        assert bin_of(1e-6, default_scale()) == 0

    def test_right_closed_boundary(self):
        # 10 falls in (1, 10], not (10, 100].
        assert bin_of(10.0, default_scale()) == 5
        assert bin_of(10.000001, default_scale()) == 6

    def test_top_bin(self):
        assert bin_of(1e9, default_scale()) == 9

    def test_domain_errors(self):
        scale = default_scale()
        for bad in (0.0, -1.0, math.inf, math.nan):
            with pytest.raises(DomainError):
                bin_of(bad, scale)

    def test_log_binning_matches_plain(self, rng):
        scale = default_scale()
        values = 10.0 ** rng.uniform(-6, 6, 1000)
        plain = np.array([bin_of(v, scale) for v in values])
        logged = bin_of_log(np.log(values), scale)
        assert np.array_equal(plain, logged)

    def test_log_binning_handles_underflowing_ratios(self):
        # exp(-5000) underflows to 0.0, but the log value still bins.
        assert bin_of_log(-5000.0, default_scale()) == 0


class TestAgreement:
    def test_identity_when_lr_equals_slr(self, rng):
        vals = rng.normal(0, 5, 400)
        hyp = np.tile([0, 1], 200)
        samples = make_samples(vals, vals, hyp)
        matrix = agreement_matrix(samples, default_scale())
        for h in Hypothesis:
            defined = matrix.row_defined[h]
            sub = matrix.probs[h][defined]
            rows = np.nonzero(defined)[0]
            for r, row in zip(rows, sub):
                assert row[r] == 1.0

    def test_single_sample_row_is_unit_vector(self):
        samples = make_samples([0.5], [0.5], [1])
        samples_hd = make_samples([0.5, 0.5], [0.5, 0.5], [1, 0])
        matrix = agreement_matrix(samples_hd, default_scale())
        row = matrix.probs[Hypothesis.Hp][5]
        assert row[5] == 1.0 and np.nansum(row) == 1.0

    def test_rows_are_stochastic(self, rng):
        samples = make_samples(
            rng.normal(0, 8, 1000), rng.normal(0, 8, 1000), rng.integers(0, 2, 1000)
        )
        matrix = agreement_matrix(samples, default_scale())
        for h in Hypothesis:
            sums = np.nansum(matrix.probs[h][matrix.row_defined[h]], axis=1)
            assert np.all(np.abs(sums - 1.0) < 1e-9)

    def test_counts_match_sample_size(self, rng):
        hyp = rng.integers(0, 2, 500)
        samples = make_samples(rng.normal(0, 3, 500), rng.normal(0, 3, 500), hyp)
        matrix = agreement_matrix(samples, default_scale())
        total = sum(matrix.counts[h].sum() for h in Hypothesis)
        assert total == 500

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            agreement_matrix(make_samples([1.0], [1.0], [1]), default_scale())

    def test_overall_equals_plain_agreement_frequency(self, rng):
        scale = default_scale()
        log_lr = rng.normal(0, 6, 2000)
        log_slr = log_lr + rng.normal(0, 2, 2000)
        hyp = rng.integers(0, 2, 2000)
        samples = make_samples(log_lr, log_slr, hyp)
        overall = overall_agreement(samples, scale)
        for h in Hypothesis:
            mask = hyp == (1 if h is Hypothesis.Hp else 0)
            direct = np.mean(
                bin_of_log(log_lr[mask], scale) == bin_of_log(log_slr[mask], scale)
            )
            assert abs(overall[h] - direct) < 1e-12

    def test_agreement_high_only_in_extreme_bins(self):
        # Agreement approaches 1 only in the lowest or highest attainable SLR
        # bins; interior bins disagree under both hypotheses.
        model = UnivariateGaussianPairModel(mu_x=0.0, mu_b=0.0, sigma_w=0.1, sigma_b=1.0)
        pipeline = build_univariate_pipeline(model, 200_000, 77, DENSITY_ANALYTIC, "binstest")
        matrix = agreement_matrix(pipeline.samples, default_scale())
        # Bottom bin is reached under Hd and agrees almost surely there.
        assert matrix.probs[Hypothesis.Hd][0, 0] > 0.95
        # The SLR is bounded by sqrt(51) < 10, so bin 5 is the top attainable
        # bin; under Hp it agrees with the LR bin almost always.
        assert matrix.probs[Hypothesis.Hp][5, 5] > 0.85
        for h in Hypothesis:
            for interior in range(1, 5):
                if matrix.row_defined[h][interior]:
                    assert matrix.probs[h][interior, interior] < 0.5

    def test_hd_agreement_monotone_across_settings(self):
        values = []
        for i, (mu_x, sigma_w) in enumerate(TABLE1_SETTINGS):
            model = UnivariateGaussianPairModel(mu_x=mu_x, mu_b=0.0, sigma_w=sigma_w, sigma_b=1.0)
            pipeline = build_univariate_pipeline(model, 40_000, 55, DENSITY_ANALYTIC, f"mono.{i}")
            values.append(overall_agreement(pipeline.samples, default_scale())[Hypothesis.Hd])
        assert values == sorted(values)


def test_agreement_csv_omits_undefined_rows(tmp_path, rng):
    samples = make_samples([0.5, 0.5], [0.5, 0.5], [1, 0])
    matrix = agreement_matrix(samples, default_scale())
    path = tmp_path / "agree.csv"
    write_agreement_csv(matrix, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "hypothesis,slr_bin,lr_bin,probability,count"
    # One defined SLR row per hypothesis, ten LR columns each.
    assert len(lines) == 1 + 2 * 10
    assert all(line.split(",")[1] == "5" for line in lines[1:])
