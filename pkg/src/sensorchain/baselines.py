"""Comparison regressors: closed-form linear fit and boosted regression trees.

The boosted model is a plain stagewise least-squares booster with
axis-aligned threshold splits, kept simple on purpose; it fills the
comparison role of a heavier gradient-boosting package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ingest import FeatureMatrix


class SingularSystemError(ValueError):
    """Normal equations are numerically singular."""


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float


@dataclass
class TreeNode:
    """Axis-aligned split node; leaves carry the mean residual."""

    value: float
    feature: int | None = None
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


@dataclass
class GbtModel:
    base_prediction: float
    trees: list[TreeNode]
    shrinkage: float
    max_depth: int


def fit_linear(train: FeatureMatrix, ridge: float = 1e-8) -> LinearModel:
    """Least squares via normal equations with a Tikhonov term.

    The bias is absorbed through an appended constant column, so ridge > 0
    penalizes it too (negligible at the default). ridge=0 is the strict
    mode: a rank-deficient system raises SingularSystemError instead of
    being smoothed over.
    """
    if train.rows < 1:
        raise ValueError("cannot fit on an empty matrix")
    if ridge < 0:
        raise ValueError(f"ridge must be >= 0, got {ridge}")
    A = np.hstack([train.X, np.ones((train.rows, 1))])
    gram = A.T @ A + ridge * np.eye(A.shape[1])
    rhs = A.T @ train.y
    try:
        w = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from None
    if not np.all(np.isfinite(w)):
        raise SingularSystemError("solution contains non-finite entries")
    return LinearModel(weights=w[:-1], bias=float(w[-1]))


def _best_split(col: np.ndarray, residual: np.ndarray) -> tuple[float, float] | None:
    """Threshold minimizing weighted child variance for one feature.

    Candidates are midpoints between consecutive sorted unique values.
    Returns (score, threshold) where lower score is better, or None if
    the column is constant. Minimizing n_l*var_l + n_r*var_r is the same
    as maximizing sum_l^2/n_l + sum_r^2/n_r, which prefix sums give in
    one pass.
    """
    order = np.argsort(col, kind="stable")
    sx = col[order]
    sv = residual[order]
    boundaries = np.nonzero(sx[:-1] < sx[1:])[0]
    if boundaries.size == 0:
        return None
    n = len(sv)
    prefix = np.cumsum(sv)
    total = prefix[-1]
    n_left = boundaries + 1
    left_sum = prefix[boundaries]
    right_sum = total - left_sum
    gain = left_sum**2 / n_left + right_sum**2 / (n - n_left)
    best = int(np.argmax(gain))
    score = float(np.sum(sv**2) - gain[best])
    threshold = float((sx[boundaries[best]] + sx[boundaries[best] + 1]) / 2.0)
    return score, threshold


def _build_tree(X: np.ndarray, residual: np.ndarray, depth: int, max_depth: int) -> TreeNode:
    node_value = float(residual.mean())
    if depth >= max_depth or len(residual) < 2 or np.all(residual == residual[0]):
        return TreeNode(value=node_value)
    best_score, best_feature, best_threshold = None, None, None
    for f in range(X.shape[1]):
        found = _best_split(X[:, f], residual)
        if found is None:
            continue
        score, threshold = found
        if best_score is None or score < best_score:
            best_score, best_feature, best_threshold = score, f, threshold
    if best_feature is None:
        return TreeNode(value=node_value)
    mask = X[:, best_feature] <= best_threshold
    return TreeNode(
        value=node_value,
        feature=best_feature,
        threshold=best_threshold,
        left=_build_tree(X[mask], residual[mask], depth + 1, max_depth),
        right=_build_tree(X[~mask], residual[~mask], depth + 1, max_depth),
    )


def _tree_predict(node: TreeNode, x: np.ndarray) -> float:
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.value


def tree_depth(node: TreeNode) -> int:
    if node.is_leaf:
        return 0
    return 1 + max(tree_depth(node.left), tree_depth(node.right))


def fit_gbt(
    train: FeatureMatrix,
    n_trees: int = 100,
    max_depth: int = 3,
    shrinkage: float = 0.1,
    seed: int = 0,
) -> GbtModel:
    """Stagewise least-squares boosting on residuals.

    Starts from the training-target mean and fits each tree to the
    current residual, damped by the shrinkage factor. The exhaustive
    split scan is deterministic; seed is accepted for interface
    stability but unused (no subsampling).
    """
    del seed
    if n_trees < 0 or max_depth < 1:
        raise ValueError("n_trees must be >= 0 and max_depth >= 1")
    if not 0.0 < shrinkage <= 1.0:
        raise ValueError(f"shrinkage must be in (0, 1], got {shrinkage}")
    base = float(train.y.mean()) if train.rows else 0.0
    residual = train.y - base
    trees = []
    for _ in range(n_trees):
        tree = _build_tree(train.X, residual, 0, max_depth)
        step = np.array([_tree_predict(tree, x) for x in train.X])
        residual = residual - shrinkage * step
        trees.append(tree)
    return GbtModel(base_prediction=base, trees=trees, shrinkage=shrinkage, max_depth=max_depth)


def predict_baseline(model: LinearModel | GbtModel, features: np.ndarray) -> float:
    """Prediction for one feature vector from either baseline."""
    x = np.asarray(features, dtype=float)
    if isinstance(model, LinearModel):
        return float(model.weights @ x + model.bias)
    total = sum(_tree_predict(tree, x) for tree in model.trees)
    return float(model.base_prediction + model.shrinkage * total)


def predict_baseline_batch(model: LinearModel | GbtModel, X: np.ndarray) -> np.ndarray:
    """Predictions for each row of X."""
    X = np.asarray(X, dtype=float)
    if isinstance(model, LinearModel):
        return X @ model.weights + model.bias
    return np.array([predict_baseline(model, x) for x in X])
