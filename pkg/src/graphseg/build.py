"""Graph construction from point clouds.

Weights come from a Gaussian kernel on Euclidean distances.  The default
kernel uses the plain (unsquared) distance,

    w_ij = exp(-|x_i - x_j| / (2 sigma^2)),

with ``squared=True`` selecting the conventional squared-exponential form
``exp(-|x_i - x_j|^2 / (2 sigma^2))``.  Dense graphs connect every pair;
k-NN graphs keep each vertex's k nearest neighbors and symmetrize by union,
so an edge is present when either endpoint selects the other.  Distance
ties are broken toward the lower vertex index, which makes the edge set
reproducible across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .graph import WeightedGraph

__all__ = [
    "PointCloud",
    "gaussian_weights",
    "knn_graph",
    "median_knn_distance",
    "is_connected",
]


@dataclass
class PointCloud:
    """Points in R^d with optional integer labels (-1 marks unknown)."""

    points: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise ValueError(f"points must be 2-D, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        self.points = pts
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=np.intp).ravel()
            if lab.size != pts.shape[0]:
                raise ValueError("labels length must match point count")
            self.labels = lab

    @property
    def n(self) -> int:
        return self.points.shape[0]


def _pairwise_sq_distances(points: np.ndarray) -> np.ndarray:
    sq = np.einsum("ij,ij->i", points, points)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (points @ points.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


def _kernel(dist2: np.ndarray, sigma: float, squared: bool) -> np.ndarray:
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if squared:
        return np.exp(-dist2 / (2.0 * sigma * sigma))
    return np.exp(-np.sqrt(dist2) / (2.0 * sigma * sigma))


def gaussian_weights(pc: PointCloud, sigma: float, *, squared: bool = False) -> WeightedGraph:
    """Complete graph with Gaussian kernel weights.

    Weights lie in (0, 1]; duplicate points get weight exactly 1.  The upper
    triangle is computed once and mirrored, so the matrix is symmetric bit
    for bit.
    """
    if pc.n < 2:
        raise ValueError("need at least two points to build a graph")
    d2 = _pairwise_sq_distances(pc.points)
    K = _kernel(d2, float(sigma), squared)
    upper = np.triu(K, k=1)
    return WeightedGraph(sparse.csr_matrix(upper + upper.T))


def _knn_select(points: np.ndarray, k: int):
    """Per-row k nearest neighbor indices and distances, ties to lower index."""
    n = points.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in 1..{n - 1}, got {k}")
    d2 = _pairwise_sq_distances(points)
    np.fill_diagonal(d2, np.inf)
    # stable sort keeps the lower vertex index first among equal distances
    order = np.argsort(d2, axis=1, kind="stable")[:, :k]
    rows = np.repeat(np.arange(n), k)
    cols = order.ravel()
    return rows, cols, d2[rows, cols]


def median_knn_distance(pc: PointCloud, k: int) -> float:
    """Median Euclidean distance over all selected k-NN pairs.

    This is the default kernel bandwidth when none is given.
    """
    _, _, d2 = _knn_select(pc.points, k)
    med = float(np.median(np.sqrt(d2)))
    if med <= 0:
        raise ValueError("median neighbor distance is zero; supply sigma explicitly")
    return med


def knn_graph(pc: PointCloud, k: int, sigma: float | None = None,
              *, squared: bool = False) -> WeightedGraph:
    """k-nearest-neighbor graph with Gaussian edge weights, union-symmetrized.

    With ``sigma=None`` the bandwidth is the median k-NN distance of the
    cloud.  With ``k = n - 1`` the edge set coincides with the dense graph.
    The result may be disconnected; solvers check the ``connected`` flag.
    """
    rows, cols, d2 = _knn_select(pc.points, k)
    if sigma is None:
        sigma = median_knn_distance(pc, k)
    w = _kernel(d2, float(sigma), squared)
    n = pc.n
    W = sparse.coo_matrix((w, (rows, cols)), shape=(n, n)).tocsr()
    W = W.maximum(W.T)
    return WeightedGraph(W)


def is_connected(graph_or_weights) -> bool:
    """Whether a graph (or raw weight matrix) has one connected component.

    Accepts a WeightedGraph, a dense array, or a sparse matrix, so degenerate
    inputs (single vertex, isolated vertices) can be queried even though
    WeightedGraph itself rejects them.
    """
    if isinstance(graph_or_weights, WeightedGraph):
        return graph_or_weights.connected
    W = graph_or_weights
    if not sparse.issparse(W):
        W = sparse.csr_matrix(np.asarray(W, dtype=np.float64))
    if W.shape[0] == 0:
        raise ValueError("empty graph has no connectivity status")
    return csgraph.connected_components(W, directed=False, return_labels=False) == 1
