import math

import numpy as np
import pytest

from slrlab import kernels
from slrlab.accel import numba_enabled
from slrlab.forest import ForestParams, TrainingSet, rf_score_batch, train_forest

needs_numba = pytest.mark.skipif(not numba_enabled(), reason="numba unavailable or disabled")


@pytest.fixture
def both_backends():
    yield
    kernels.set_backend(None)


def brute_force_kde(sorted_pts, n_raw, bw, queries, log_floor):
    out = np.empty(len(queries))
    norm = math.log(n_raw * bw * math.sqrt(2 * math.pi))
    for i, q in enumerate(queries):
        e = -((q - sorted_pts) ** 2) / (2 * bw * bw)
        m = e.max()
        v = m + math.log(np.exp(e - m).sum()) - norm
        out[i] = max(v, log_floor)
    return out


class TestKdeKernel:
    def test_window_matches_brute_force(self, rng):
        pts = np.sort(rng.normal(0, 1, 5000))
        q = rng.uniform(-5, 5, 200)
        got = kernels.kde_logdensity_kernel(pts, len(pts), 0.1, q, -690.0)
        expected = brute_force_kde(pts, len(pts), 0.1, q, -690.0)
        assert np.allclose(got, expected, rtol=1e-12, atol=1e-12)

    def test_far_query_floors(self, rng):
        pts = np.sort(rng.normal(0, 1, 100))
        got = kernels.kde_logdensity_kernel(pts, 100, 0.1, np.array([1e6]), -690.0)
        assert got[0] == -690.0

    @needs_numba
    def test_backends_agree(self, rng, both_backends):
        pts = np.sort(rng.gamma(2.0, 1.0, 20_000))
        q = rng.uniform(-1, 15, 500)
        kernels.set_backend("numba")
        a = kernels.kde_logdensity_kernel(pts, len(pts), 0.05, q, -690.0)
        kernels.set_backend("numpy")
        b = kernels.kde_logdensity_kernel(pts, len(pts), 0.05, q, -690.0)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


class TestForestKernels:
    @needs_numba
    def test_backends_grow_identical_forests(self, rng, both_backends):
        X = rng.normal(0, 1, (1500, 8))
        y = (X[:, 1] - X[:, 4] + rng.normal(0, 0.3, 1500) > 0).astype(np.int64)
        data = TrainingSet(features=X, labels=y)
        params = ForestParams(n_trees=15, seed=99)
        kernels.set_backend("numba")
        f1 = train_forest(data, params)
        kernels.set_backend("numpy")
        f2 = train_forest(data, params)
        for name in ("feature", "threshold", "left", "right", "leaf", "offsets"):
            assert np.array_equal(getattr(f1, name), getattr(f2, name)), name

    @needs_numba
    def test_backends_apply_identically(self, rng, both_backends):
        X = rng.normal(0, 1, (800, 6))
        y = (X[:, 0] > 0.2).astype(np.int64)
        data = TrainingSet(features=X, labels=y)
        kernels.set_backend("numba")
        forest = train_forest(data, ForestParams(n_trees=10, seed=1))
        q = rng.normal(0, 1, (300, 6))
        a = rf_score_batch(forest, q)
        kernels.set_backend("numpy")
        b = rf_score_batch(forest, q)
        assert np.array_equal(a, b)

    def test_tied_feature_values_split_cleanly(self, rng):
        # Dozens of duplicated values: splits must only occur between
        # distinct values and the partition must respect the threshold.
        X = np.repeat(rng.normal(0, 1, (60, 3)), 4, axis=0)
        y = (X[:, 0] + 0.1 * rng.standard_normal(240) > 0).astype(np.int64)
        data = TrainingSet(features=X, labels=y)
        forest = train_forest(data, ForestParams(n_trees=5, seed=3))
        scores = rf_score_batch(forest, X)
        assert np.all((scores >= 0) & (scores <= 1))


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.set_backend("gpu")
