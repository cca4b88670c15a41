"""Hot numeric kernels, each with a jitted loop implementation and a
vectorized numpy fallback.

The two implementations of every kernel are algorithmically identical:
same candidate enumeration order, same tie-breaking, same accumulation
structure.  Tree growth produces bit-identical forests on either path;
the density kernels agree to float rounding (~1e-15 relative).

Backend selection: automatic from :mod:`slrlab.accel` (numba unless
``SLRLAB_DISABLE_NUMBA=1`` or numba is missing), overridable in-process
with :func:`set_backend` for tests and benchmarks.
"""

import math

import numpy as np

from .accel import njit, numba_enabled

_BACKEND_OVERRIDE: str | None = None


def set_backend(mode: str | None) -> None:
    """Force 'numba' or 'numpy', or None to restore automatic selection."""
    global _BACKEND_OVERRIDE
    if mode not in (None, "numba", "numpy"):
        raise ValueError(f"backend must be 'numba', 'numpy', or None, got {mode!r}")
    if mode == "numba" and not numba_enabled():
        raise RuntimeError("numba backend requested but numba is unavailable or disabled")
    _BACKEND_OVERRIDE = mode


def backend() -> str:
    if _BACKEND_OVERRIDE is not None:
        return _BACKEND_OVERRIDE
    return "numba" if numba_enabled() else "numpy"


# ---------------------------------------------------------------------------
# Gaussian-kernel log density over a sorted point array.
#
# Contributions from points farther than 39 bandwidths underflow to zero in
# float64, so restricting each query to that window keeps the sum exact.
# ---------------------------------------------------------------------------


def _kde_window_bounds(sorted_pts, bw, queries):
    cutoff = 39.0 * bw
    lo = np.searchsorted(sorted_pts, queries - cutoff, side="left")
    hi = np.searchsorted(sorted_pts, queries + cutoff, side="right")
    return lo, hi


@njit(cache=True, nogil=True)
def _kde_logdensity_jit(sorted_pts, lo, hi, inv_two_bw2, log_norm, queries, log_floor, out):
    for qi in range(queries.shape[0]):
        a = lo[qi]
        b = hi[qi]
        if b <= a:
            out[qi] = log_floor
            continue
        q = queries[qi]
        m = -np.inf
        for i in range(a, b):
            d = q - sorted_pts[i]
            e = -d * d * inv_two_bw2
            if e > m:
                m = e
        total = 0.0
        for i in range(a, b):
            d = q - sorted_pts[i]
            total += np.exp(-d * d * inv_two_bw2 - m)
        v = m + np.log(total) - log_norm
        out[qi] = v if v > log_floor else log_floor


def _kde_logdensity_numpy(sorted_pts, lo, hi, inv_two_bw2, log_norm, queries, log_floor, out):
    for qi in range(queries.shape[0]):
        a, b = lo[qi], hi[qi]
        if b <= a:
            out[qi] = log_floor
            continue
        e = -((queries[qi] - sorted_pts[a:b]) ** 2) * inv_two_bw2
        m = e.max()
        v = m + math.log(np.exp(e - m).sum()) - log_norm
        out[qi] = v if v > log_floor else log_floor


def kde_logdensity_kernel(
    sorted_pts: np.ndarray,
    n_raw: int,
    bw: float,
    queries: np.ndarray,
    log_floor: float,
) -> np.ndarray:
    """Floored log kernel-density values at the query points.

    ``sorted_pts`` may contain reflected images of the raw sample; ``n_raw``
    is the size of the raw sample and sets the normalization.
    """
    queries = np.ascontiguousarray(queries, dtype=np.float64)
    out = np.empty(queries.shape[0], dtype=np.float64)
    lo, hi = _kde_window_bounds(sorted_pts, bw, queries)
    log_norm = math.log(n_raw * bw * math.sqrt(2.0 * math.pi))
    inv_two_bw2 = 1.0 / (2.0 * bw * bw)
    impl = _kde_logdensity_jit if backend() == "numba" else _kde_logdensity_numpy
    impl(sorted_pts, lo, hi, inv_two_bw2, log_norm, queries, log_floor, out)
    return out


# ---------------------------------------------------------------------------
# Decision-tree growth.
#
# Splits maximize sum_side (k^2 + (n-k)^2) / n_side, which is equivalent to
# minimizing the count-weighted Gini impurity.  All intermediate quantities
# are exact integers below 2^53, so the two backends produce bit-identical
# trees.  Candidate order is: features in the sampled order, thresholds in
# ascending value order, strictly-greater comparisons (first best wins).
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _grow_tree_jit(Xb, yb, feat_table, max_depth, min_leaf, feature, threshold, left, right, leaf):
    n = Xb.shape[0]
    mtry = feat_table.shape[1]
    max_nodes = feature.shape[0]
    work = np.arange(n)
    tmp = np.empty(n, np.int64)
    stack_node = np.empty(max_nodes, np.int64)
    stack_start = np.empty(max_nodes, np.int64)
    stack_end = np.empty(max_nodes, np.int64)
    stack_depth = np.empty(max_nodes, np.int64)
    top = 0
    stack_node[top] = 0
    stack_start[top] = 0
    stack_end[top] = n
    stack_depth[top] = 0
    top += 1
    n_nodes = 1
    vals = np.empty(n, np.float64)
    while top > 0:
        top -= 1
        node = stack_node[top]
        start = stack_start[top]
        end = stack_end[top]
        depth = stack_depth[top]
        m = end - start
        k = 0
        for i in range(start, end):
            k += yb[work[i]]
        if depth >= max_depth or m < 2 * min_leaf or k == 0 or k == m:
            feature[node] = -1
            leaf[node] = k / m
            continue
        best_score = -1.0
        best_feat = -1
        best_thr = 0.0
        for fi in range(mtry):
            f = feat_table[node, fi]
            for i in range(m):
                vals[i] = Xb[work[start + i], f]
            order = np.argsort(vals[:m], kind="mergesort")
            ck = 0
            for i in range(m - 1):
                ck += yb[work[start + order[i]]]
                nl = i + 1
                if nl < min_leaf:
                    continue
                if nl > m - min_leaf:
                    break
                vi = vals[order[i]]
                vn = vals[order[i + 1]]
                if vi == vn:
                    continue
                kl = ck
                nr = m - nl
                kr = k - kl
                a = kl * kl + (nl - kl) * (nl - kl)
                b = kr * kr + (nr - kr) * (nr - kr)
                score = a / nl + b / nr
                if score > best_score:
                    best_score = score
                    best_feat = f
                    best_thr = (vi + vn) / 2.0
        if best_feat < 0:
            feature[node] = -1
            leaf[node] = k / m
            continue
        count = 0
        for i in range(start, end):
            if Xb[work[i], best_feat] <= best_thr:
                count += 1
        li = 0
        ri = count
        for i in range(start, end):
            row = work[i]
            if Xb[row, best_feat] <= best_thr:
                tmp[li] = row
                li += 1
            else:
                tmp[ri] = row
                ri += 1
        for i in range(m):
            work[start + i] = tmp[i]
        left_id = n_nodes
        right_id = n_nodes + 1
        n_nodes += 2
        feature[node] = best_feat
        threshold[node] = best_thr
        left[node] = left_id
        right[node] = right_id
        stack_node[top] = right_id
        stack_start[top] = start + count
        stack_end[top] = end
        stack_depth[top] = depth + 1
        top += 1
        stack_node[top] = left_id
        stack_start[top] = start
        stack_end[top] = start + count
        stack_depth[top] = depth + 1
        top += 1
    return n_nodes


def _grow_tree_numpy(Xb, yb, feat_table, max_depth, min_leaf, feature, threshold, left, right, leaf):
    n = Xb.shape[0]
    stack = [(0, np.arange(n), 0)]
    n_nodes = 1
    while stack:
        node, rows, depth = stack.pop()
        m = rows.size
        labs = yb[rows]
        k = int(labs.sum())
        if depth >= max_depth or m < 2 * min_leaf or k == 0 or k == m:
            feature[node] = -1
            leaf[node] = k / m
            continue
        best_score = -1.0
        best_feat = -1
        best_thr = 0.0
        pos = np.arange(min_leaf - 1, m - min_leaf)
        for f in feat_table[node]:
            vals = Xb[rows, f]
            order = np.argsort(vals, kind="mergesort")
            v = vals[order]
            ck = np.cumsum(labs[order])
            distinct = v[pos] < v[pos + 1]
            if not distinct.any():
                continue
            nl = pos + 1
            kl = ck[pos]
            nr = m - nl
            kr = k - kl
            a = kl * kl + (nl - kl) * (nl - kl)
            b = kr * kr + (nr - kr) * (nr - kr)
            score = a / nl + b / nr
            score[~distinct] = -np.inf
            j = int(np.argmax(score))
            if score[j] > best_score:
                best_score = float(score[j])
                best_feat = int(f)
                best_thr = (v[pos[j]] + v[pos[j] + 1]) / 2.0
        if best_feat < 0:
            feature[node] = -1
            leaf[node] = k / m
            continue
        mask = Xb[rows, best_feat] <= best_thr
        left_id = n_nodes
        right_id = n_nodes + 1
        n_nodes += 2
        feature[node] = best_feat
        threshold[node] = best_thr
        left[node] = left_id
        right[node] = right_id
        stack.append((right_id, rows[~mask], depth + 1))
        stack.append((left_id, rows[mask], depth + 1))
    return n_nodes


def grow_tree_kernel(Xb, yb, feat_table, max_depth, min_leaf, feature, threshold, left, right, leaf):
    """Grow one tree into the preallocated node arrays; returns node count."""
    impl = _grow_tree_jit if backend() == "numba" else _grow_tree_numpy
    return impl(
        Xb,
        yb,
        feat_table,
        np.int64(max_depth),
        np.int64(min_leaf),
        feature,
        threshold,
        left,
        right,
        leaf,
    )


# ---------------------------------------------------------------------------
# Forest traversal: mean leaf proportion over packed trees.
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _forest_apply_jit(X, feature, threshold, left, right, leaf, offsets, out):
    n_trees = offsets.shape[0] - 1
    for s in range(X.shape[0]):
        acc = 0.0
        for t in range(n_trees):
            node = offsets[t]
            while feature[node] >= 0:
                if X[s, feature[node]] <= threshold[node]:
                    node = left[node]
                else:
                    node = right[node]
            acc += leaf[node]
        out[s] = acc / n_trees


def _forest_apply_numpy(X, feature, threshold, left, right, leaf, offsets, out):
    n = X.shape[0]
    n_trees = offsets.shape[0] - 1
    total = np.zeros(n, dtype=np.float64)
    for t in range(n_trees):
        node = np.full(n, offsets[t], dtype=np.int64)
        while True:
            f = feature[node]
            active = np.nonzero(f >= 0)[0]
            if active.size == 0:
                break
            idx = node[active]
            go_left = X[active, feature[idx]] <= threshold[idx]
            node[active] = np.where(go_left, left[idx], right[idx])
        total += leaf[node]
    out[:] = total / n_trees


def forest_apply_kernel(X, feature, threshold, left, right, leaf, offsets) -> np.ndarray:
    """Mean leaf proportion across trees for each row of X.

    Trees are packed into flat arrays; ``offsets[t]`` is the root index of
    tree t and child indices are global.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    out = np.empty(X.shape[0], dtype=np.float64)
    impl = _forest_apply_jit if backend() == "numba" else _forest_apply_numpy
    impl(X, feature, threshold, left, right, leaf, offsets, out)
    return out
