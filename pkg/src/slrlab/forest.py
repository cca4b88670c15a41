"""From-scratch random-forest binary classifier.

The forest's predicted class proportion is the machine-learned similarity
score: each tree is grown on a bootstrap resample with Gini-impurity
threshold splits over a per-node feature subsample, leaves store the
proportion of Hp-labelled rows, and the score of a feature vector is the
mean leaf proportion across trees.  Training is deterministic given the
seed and independent of the worker count.
"""

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, DomainError, EmptyClass
from .kernels import forest_apply_kernel, grow_tree_kernel
from .rng import derive_rng

SERIALIZATION_VERSION = 1


@dataclass(frozen=True)
class TrainingSet:
    """Feature rows (concatenated known- and unknown-source evidence) with
    hypothesis labels (1 = Hp, 0 = Hd)."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        features = np.ascontiguousarray(self.features, dtype=np.float64)
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        if features.ndim != 2:
            raise DimensionMismatch("features must be a 2-d array")
        if labels.shape != (features.shape[0],):
            raise DimensionMismatch("labels must match the number of feature rows")
        if not np.all((labels == 0) | (labels == 1)):
            raise DomainError("labels must be 0 (Hd) or 1 (Hp)")
        for value, name in ((1, "Hp"), (0, "Hd")):
            if not np.any(labels == value):
                raise EmptyClass(f"training set has no {name} rows")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def n_features(self) -> int:
        return self.features.shape[1]


def pair_features(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Concatenate known- and unknown-source evidence into classifier rows."""
    x2 = x[:, None] if x.ndim == 1 else x
    y2 = y[:, None] if y.ndim == 1 else y
    return np.hstack([x2, y2])


def training_set_from_pairs(x_hp, y_hp, x_hd, y_hd) -> TrainingSet:
    """Balanced-label training set from per-hypothesis evidence pairs."""
    feats_hp = pair_features(x_hp, y_hp)
    feats_hd = pair_features(x_hd, y_hd)
    features = np.vstack([feats_hp, feats_hd])
    labels = np.concatenate(
        [np.ones(feats_hp.shape[0], dtype=np.int64), np.zeros(feats_hd.shape[0], dtype=np.int64)]
    )
    return TrainingSet(features=features, labels=labels)


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 300
    mtry: int | None = None  # None: ceil(sqrt(n_features)) at training time
    max_depth: int = 20
    min_leaf: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1 or self.max_depth < 1 or self.min_leaf < 1:
            raise DomainError("n_trees, max_depth, and min_leaf must be positive")
        if self.mtry is not None and self.mtry < 1:
            raise DomainError("mtry must be positive")

    def resolve_mtry(self, n_features: int) -> int:
        mtry = self.mtry if self.mtry is not None else math.ceil(math.sqrt(n_features))
        if mtry > n_features:
            raise DomainError(f"mtry={mtry} exceeds the feature count {n_features}")
        return mtry


@dataclass(frozen=True)
class Forest:
    """Trained forest packed into flat node arrays (feature < 0 marks a leaf;
    child indices are global across the packed trees)."""

    params: ForestParams
    n_features: int
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    leaf: np.ndarray
    offsets: np.ndarray = field(repr=False)

    @property
    def n_trees(self) -> int:
        return len(self.offsets) - 1


def _grow_one_tree(Xb, yb, seed: int, tree_index: int, mtry: int, max_depth: int, min_leaf: int):
    n, q = Xb.shape
    rng = derive_rng(seed, "forest.tree", tree_index)
    boot = rng.integers(0, n, n)
    max_nodes = 2 * max(1, n // min_leaf) + 3
    # Feature subsets are pre-drawn per node id so the growth kernels never
    # consume randomness themselves.
    feat_table = np.argsort(rng.random((max_nodes, q)), axis=1)[:, :mtry].astype(np.int64)
    feat_table = np.ascontiguousarray(feat_table)
    feature = np.empty(max_nodes, dtype=np.int64)
    threshold = np.zeros(max_nodes, dtype=np.float64)
    left = np.zeros(max_nodes, dtype=np.int64)
    right = np.zeros(max_nodes, dtype=np.int64)
    leaf = np.zeros(max_nodes, dtype=np.float64)
    n_nodes = grow_tree_kernel(
        np.ascontiguousarray(Xb[boot]),
        np.ascontiguousarray(yb[boot]),
        feat_table,
        max_depth,
        min_leaf,
        feature,
        threshold,
        left,
        right,
        leaf,
    )
    return (
        feature[:n_nodes].copy(),
        threshold[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        leaf[:n_nodes].copy(),
    )


def _pack_trees(trees, params: ForestParams, n_features: int) -> Forest:
    sizes = [t[0].shape[0] for t in trees]
    offsets = np.zeros(len(trees) + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    feature = np.concatenate([t[0] for t in trees])
    threshold = np.concatenate([t[1] for t in trees])
    leaf = np.concatenate([t[4] for t in trees])
    left = np.empty_like(feature)
    right = np.empty_like(feature)
    for t, (start, size) in enumerate(zip(offsets[:-1], sizes)):
        sl = slice(start, start + size)
        left[sl] = trees[t][2] + start
        right[sl] = trees[t][3] + start
    return Forest(
        params=params,
        n_features=n_features,
        feature=feature,
        threshold=threshold,
        left=left,
        right=right,
        leaf=leaf,
        offsets=offsets,
    )


def train_forest(data: TrainingSet, params: ForestParams, threads: int = 1) -> Forest:
    """Train the forest; identical output for any thread count."""
    X = data.features
    y = data.labels
    mtry = params.resolve_mtry(data.n_features)

    def build(t: int):
        return _grow_one_tree(X, y, params.seed, t, mtry, params.max_depth, params.min_leaf)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trees = list(pool.map(build, range(params.n_trees)))
    else:
        trees = [build(t) for t in range(params.n_trees)]
    return _pack_trees(trees, params, data.n_features)


def rf_score_batch(forest: Forest, features: np.ndarray) -> np.ndarray:
    """Scores in [0, 1] for a batch of feature rows."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim == 1:
        features = features[None, :]
    if features.shape[1] != forest.n_features:
        raise DimensionMismatch(
            f"expected {forest.n_features} features, got {features.shape[1]}"
        )
    return forest_apply_kernel(
        features,
        forest.feature,
        forest.threshold,
        forest.left,
        forest.right,
        forest.leaf,
        forest.offsets,
    )


def rf_score(forest: Forest, features: np.ndarray) -> float:
    return float(rf_score_batch(forest, features)[0])


def clamp_scores(scores: np.ndarray, n_train: int) -> np.ndarray:
    """Pull scores of exactly 0 or 1 just inside the open interval so that
    boundary atoms cannot produce infinite density ratios downstream."""
    eps = 1.0 / (2.0 * n_train)
    return np.clip(scores, eps, 1.0 - eps)


def forest_to_json(forest: Forest) -> str:
    doc = {
        "version": SERIALIZATION_VERSION,
        "n_features": forest.n_features,
        "params": {
            "n_trees": forest.params.n_trees,
            "mtry": forest.params.mtry,
            "max_depth": forest.params.max_depth,
            "min_leaf": forest.params.min_leaf,
            "seed": forest.params.seed,
        },
        "offsets": forest.offsets.tolist(),
        "feature": forest.feature.tolist(),
        "threshold": forest.threshold.tolist(),
        "left": forest.left.tolist(),
        "right": forest.right.tolist(),
        "leaf": forest.leaf.tolist(),
    }
    return json.dumps(doc, sort_keys=True)


def forest_from_json(text: str) -> Forest:
    doc = json.loads(text)
    if doc.get("version") != SERIALIZATION_VERSION:
        raise DomainError(f"unsupported forest serialization version {doc.get('version')!r}")
    params = ForestParams(**doc["params"])
    return Forest(
        params=params,
        n_features=int(doc["n_features"]),
        feature=np.asarray(doc["feature"], dtype=np.int64),
        threshold=np.asarray(doc["threshold"], dtype=np.float64),
        left=np.asarray(doc["left"], dtype=np.int64),
        right=np.asarray(doc["right"], dtype=np.int64),
        leaf=np.asarray(doc["leaf"], dtype=np.float64),
        offsets=np.asarray(doc["offsets"], dtype=np.int64),
    )
