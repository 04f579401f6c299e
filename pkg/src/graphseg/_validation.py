"""Input validation shared by the estimator layer."""

from __future__ import annotations

import numpy as np
from scipy import sparse
from sklearn.utils.validation import check_array

from .graph import LabelData, WeightedGraph


def check_features(X) -> np.ndarray:
    """Validate a feature matrix: 2-D, finite, float64, at least two rows."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[0] < 2:
        raise ValueError("need at least two samples")
    return X


def check_semi_supervised_targets(y, n: int):
    """Validate targets with -1 marking unlabeled entries.

    Returns ``(classes, boundary, boundary_classes)`` where ``classes`` are
    the sorted distinct labeled values and ``boundary_classes`` are their
    zero-based positions per labeled vertex.
    """
    y = np.asarray(y)
    if y.ndim != 1 or y.shape[0] != n:
        raise ValueError(f"y must be a vector of length {n}")
    if not np.issubdtype(y.dtype, np.integer):
        yi = y.astype(np.intp)
        if np.any(yi != y):
            raise ValueError("y must contain integers (-1 for unlabeled)")
        y = yi
    if np.any(y < -1):
        raise ValueError("labels must be >= -1 (-1 marks unlabeled)")
    boundary = np.flatnonzero(y != -1)
    if boundary.size == 0:
        raise ValueError("at least one labeled sample is required")
    classes, boundary_classes = np.unique(y[boundary], return_inverse=True)
    return classes, boundary, boundary_classes.astype(np.intp)


def resolve_graph(X, *, graph: str, n_neighbors: int, sigma, squared: bool) -> WeightedGraph:
    """Turn estimator input into a WeightedGraph.

    ``graph="precomputed"`` accepts a WeightedGraph or a symmetric weight
    matrix; otherwise X is a feature matrix and the named builder runs.
    """
    from .build import PointCloud, gaussian_weights, knn_graph

    if graph == "precomputed":
        if isinstance(X, WeightedGraph):
            return X
        if sparse.issparse(X) or (isinstance(X, np.ndarray) and X.ndim == 2
                                  and X.shape[0] == X.shape[1]):
            return WeightedGraph(X)
        raise ValueError("graph='precomputed' expects a WeightedGraph or square matrix")
    pc = PointCloud(check_features(X))
    if graph == "knn":
        return knn_graph(pc, n_neighbors, sigma, squared=squared)
    if graph == "dense":
        if sigma is None:
            raise ValueError("dense graphs need an explicit sigma")
        return gaussian_weights(pc, sigma, squared=squared)
    raise ValueError(f"unknown graph kind {graph!r}; expected knn, dense, or precomputed")


def label_data_from_targets(y, n: int) -> tuple:
    classes, boundary, boundary_classes = check_semi_supervised_targets(y, n)
    labels = LabelData(boundary, boundary_classes, k=len(classes))
    return classes, labels
