"""Benchmark the jitted kernels against the pure-numpy fallback.

Run: python benchmarks/bench_kernels.py

Both backends run in the same process (the fallback can also be forced
globally with SLRLAB_DISABLE_NUMBA=1).
"""

import time

import numpy as np

from slrlab import kernels
from slrlab.accel import numba_enabled
from slrlab.density import kde_fit, kde_logdensity_batch
from slrlab.forest import ForestParams, TrainingSet, rf_score_batch, train_forest


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_kde(backend):
    rng = np.random.default_rng(0)
    kde = kde_fit(rng.gamma(2.0, 1.0, 100_000))
    queries = rng.uniform(0.0, 15.0, 20_000)
    kernels.set_backend(backend)
    kde_logdensity_batch(kde, queries[:10])  # warm up / compile
    elapsed, out = timeit(lambda: kde_logdensity_batch(kde, queries))
    kernels.set_backend(None)
    return elapsed, float(out.sum())


def bench_forest(backend):
    rng = np.random.default_rng(1)
    X = rng.normal(0.0, 1.0, (20_000, 10))
    y = (X[:, 0] + 0.5 * X[:, 5] + rng.normal(0.0, 0.7, 20_000) > 0).astype(np.int64)
    data = TrainingSet(features=X, labels=y)
    params = ForestParams(n_trees=30, seed=3)
    kernels.set_backend(backend)
    train_forest(data, ForestParams(n_trees=1, seed=3))  # warm up / compile
    elapsed, forest = timeit(lambda: train_forest(data, params), repeats=1)
    apply_elapsed, scores = timeit(lambda: rf_score_batch(forest, X))
    kernels.set_backend(None)
    return elapsed, apply_elapsed, float(scores.sum())


def main():
    backends = ["numpy"] + (["numba"] if numba_enabled() else [])
    print(f"available backends: {backends}")
    results = {}
    for backend in backends:
        kde_t, kde_check = bench_kde(backend)
        train_t, apply_t, forest_check = bench_forest(backend)
        results[backend] = (kde_t, train_t, apply_t)
        print(
            f"{backend:6s}  kde eval: {kde_t:7.3f} s   "
            f"forest train: {train_t:7.3f} s   forest apply: {apply_t:7.3f} s   "
            f"(checksums {kde_check:.6g} / {forest_check:.6g})"
        )
    if len(results) == 2:
        for i, name in enumerate(("kde eval", "forest train", "forest apply")):
            speedup = results["numpy"][i] / results["numba"][i]
            print(f"numba speedup on {name}: {speedup:.1f}x")


if __name__ == "__main__":
    main()
