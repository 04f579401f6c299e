"""Weighted graphs and the discrete calculus used by all solvers.

A weighted graph on vertices ``0..n-1`` carries a symmetric nonnegative
weight matrix ``W`` with zero diagonal.  The degree is ``d(x) = sum_y w_xy``,
the (unnormalized) Laplacian acts by ``L u(x) = sum_y w_xy (u(x) - u(y))``
and the averaging operator by ``A u(x) = (1/d(x)) sum_y w_xy u(y)``, so
``A = I - D^{-1} L``.  Energies are accumulated per edge: the Dirichlet
energy is ``sum_{edges xy} w_xy (u(y) - u(x))^2`` and the cross energy is
the corresponding bilinear form.

Multi-class states are plain float64 arrays of shape ``(n, k)``, one column
per class.  A state is *segregated* when every row has at most one nonzero
entry; boundary conditions are one-hot rows on the labeled vertex set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

__all__ = [
    "WeightedGraph",
    "LabelData",
    "laplacian_apply",
    "average",
    "dirichlet_energy",
    "cross_energy",
    "l2_energy",
    "segregation_energy",
    "hat_transform",
    "hat_inverse",
    "is_segregated",
]


def _as_sparse_weights(matrix) -> sparse.csr_matrix:
    """Coerce a dense or sparse weight matrix to canonical CSR float64."""
    if sparse.issparse(matrix):
        W = matrix.tocsr().astype(np.float64)
    else:
        arr = np.asarray(matrix, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"weight matrix must be square, got shape {arr.shape}")
        W = sparse.csr_matrix(arr)
    W.sum_duplicates()
    W.sort_indices()
    return W


class WeightedGraph:
    """Symmetric weighted graph with cached degrees and connectivity flag.

    Parameters
    ----------
    weights : (n, n) array or sparse matrix
        Symmetric, nonnegative, zero diagonal.  Symmetry is verified at
        construction; an asymmetric matrix is rejected rather than repaired.

    Attributes
    ----------
    W : scipy.sparse.csr_matrix
        Canonical adjacency, both (i, j) and (j, i) stored.
    degrees : (n,) ndarray
        Strictly positive; isolated vertices are not accepted.
    connected : bool
        Whether the graph has a single connected component.
    """

    def __init__(self, weights):
        W = _as_sparse_weights(weights)
        if (W != W.T).nnz != 0:
            raise ValueError("weight matrix must be symmetric")
        if W.nnz and W.data.min() < 0.0:
            raise ValueError("weights must be nonnegative")
        if np.count_nonzero(W.diagonal()) != 0:
            raise ValueError("weight matrix must have zero diagonal (no self loops)")
        W.eliminate_zeros()
        degrees = np.asarray(W.sum(axis=1)).ravel()
        if W.shape[0] == 0:
            raise ValueError("graph must have at least one vertex")
        if np.any(degrees <= 0.0):
            bad = int(np.argmin(degrees))
            raise ValueError(f"vertex {bad} is isolated (degree 0); not accepted")
        self.W = W
        self.degrees = degrees
        self.connected = csgraph.connected_components(W, directed=False, return_labels=False) == 1

    @property
    def n(self) -> int:
        return self.W.shape[0]

    def neighbors(self, x: int) -> np.ndarray:
        """Indices adjacent to ``x`` in ascending order."""
        return self.W.indices[self.W.indptr[x]:self.W.indptr[x + 1]]

    def edge_arrays(self):
        """Each undirected edge once as (rows, cols, weights) with rows < cols."""
        upper = sparse.triu(self.W, k=1).tocoo()
        return upper.row, upper.col, upper.data

    def __repr__(self) -> str:
        return (f"WeightedGraph(n={self.n}, edges={self.W.nnz // 2}, "
                f"connected={self.connected})")


@dataclass(frozen=True)
class LabelData:
    """Labeled vertex set and its one-hot boundary values.

    ``boundary`` holds distinct vertex indices, ``labels`` the class of each
    labeled vertex as a zero-based integer in ``0..k-1``.  Every class in
    ``0..k-1`` must appear at least once.  Classes are presented one-based in
    human-facing output but stay zero-based everywhere internally.
    """

    boundary: np.ndarray
    labels: np.ndarray
    k: int = field(default=0)

    def __post_init__(self):
        boundary = np.asarray(self.boundary, dtype=np.intp).ravel()
        labels = np.asarray(self.labels, dtype=np.intp).ravel()
        object.__setattr__(self, "boundary", boundary)
        object.__setattr__(self, "labels", labels)
        if boundary.size == 0:
            raise ValueError("boundary must contain at least one labeled vertex")
        if boundary.size != labels.size:
            raise ValueError("boundary and labels must have equal length")
        if np.unique(boundary).size != boundary.size:
            raise ValueError("boundary indices must be distinct")
        k = self.k if self.k else int(labels.max()) + 1
        object.__setattr__(self, "k", k)
        if labels.min() < 0 or labels.max() >= k:
            raise ValueError(f"labels must lie in 0..{k - 1}")
        present = np.unique(labels)
        if present.size != k:
            missing = sorted(set(range(k)) - set(present.tolist()))
            raise ValueError(f"every class must appear on the boundary; missing {missing}")

    def phi(self, n: int) -> np.ndarray:
        """One-hot boundary state extended by zero: shape (n, k)."""
        if self.boundary.max() >= n:
            raise ValueError("boundary index out of range for graph size")
        U = np.zeros((n, self.k))
        U[self.boundary, self.labels] = 1.0
        return U

    def interior_mask(self, n: int) -> np.ndarray:
        mask = np.ones(n, dtype=bool)
        mask[self.boundary] = False
        return mask


def _check_state_shape(g: WeightedGraph, u) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    if u.shape[0] != g.n:
        raise ValueError(f"state has {u.shape[0]} rows, graph has {g.n} vertices")
    if not np.all(np.isfinite(u)):
        raise ValueError("state must be finite")
    return u


def laplacian_apply(g: WeightedGraph, u) -> np.ndarray:
    """Apply the unnormalized Laplacian, ``L u(x) = sum_y w_xy (u(x) - u(y))``.

    ``u`` may be a single function of shape (n,) or a multi-class state of
    shape (n, k); the operator acts column-wise.
    """
    u = _check_state_shape(g, u)
    d = g.degrees if u.ndim == 1 else g.degrees[:, None]
    return d * u - g.W @ u


def average(g: WeightedGraph, u) -> np.ndarray:
    """Neighborhood average ``A u(x) = (1/d(x)) sum_y w_xy u(y)``.

    Satisfies ``A u = u - D^{-1} L u`` and fixes constants.
    """
    u = _check_state_shape(g, u)
    d = g.degrees if u.ndim == 1 else g.degrees[:, None]
    return (g.W @ u) / d


def dirichlet_energy(g: WeightedGraph, u) -> float:
    """Energy ``sum_{edges xy} w_xy (u(y) - u(x))^2`` of one function (n,)."""
    u = _check_state_shape(g, u)
    if u.ndim != 1:
        raise ValueError("dirichlet_energy expects a single function of shape (n,)")
    rows, cols, w = g.edge_arrays()
    diff = u[cols] - u[rows]
    return float(np.dot(w, diff * diff))


def cross_energy(g: WeightedGraph, u, v) -> float:
    """Bilinear form ``sum_{edges xy} w_xy (u(y)-u(x)) (v(y)-v(x))``.

    Coincides with ``dirichlet_energy`` on the diagonal and with the inner
    product ``(L u, v)`` for any pair of functions.
    """
    u = _check_state_shape(g, u)
    v = _check_state_shape(g, v)
    if u.ndim != 1 or v.ndim != 1:
        raise ValueError("cross_energy expects functions of shape (n,)")
    rows, cols, w = g.edge_arrays()
    return float(np.dot(w, (u[cols] - u[rows]) * (v[cols] - v[rows])))


def l2_energy(g: WeightedGraph, U) -> float:
    """Sum of per-class Dirichlet energies of a state (n, k)."""
    U = _check_state_shape(g, U)
    if U.ndim != 2:
        raise ValueError("l2_energy expects a state of shape (n, k)")
    rows, cols, w = g.edge_arrays()
    diff = U[cols] - U[rows]
    return float(np.dot(w, (diff * diff).sum(axis=1)))


def segregation_energy(g: WeightedGraph, U) -> float:
    """Competition energy: half the l2 energy minus all cross terms.

    ``J(U) = (1/2) sum_i ||grad u_i||^2 - sum_{i != j} (grad u_i, grad u_j)``
    with the cross sum over ordered pairs.  On segregated states this is the
    objective whose minimizer is unique on connected graphs.
    """
    U = _check_state_shape(g, U)
    if U.ndim != 2:
        raise ValueError("segregation_energy expects a state of shape (n, k)")
    rows, cols, w = g.edge_arrays()
    diff = U[cols] - U[rows]
    per_class = np.dot(w, (diff * diff).sum(axis=1))
    # sum_{i != j} (grad u_i, grad u_j) = ||grad sum_i u_i||^2 - sum_i ||grad u_i||^2
    total_diff = diff.sum(axis=1)
    cross = np.dot(w, total_diff * total_diff) - per_class
    return float(0.5 * per_class - cross)


def hat_transform(U) -> np.ndarray:
    """Per-vertex competition transform ``z_i -> z_i - sum_{j != i} z_j``.

    Linear with matrix ``2 I - ones(k, k)``; singular exactly at k = 2,
    where constant rows are annihilated.
    """
    U = np.asarray(U, dtype=np.float64)
    if U.ndim != 2:
        raise ValueError("hat_transform expects a state of shape (n, k)")
    return 2.0 * U - U.sum(axis=1, keepdims=True)


def hat_inverse(Uhat) -> np.ndarray:
    """Invert :func:`hat_transform` for k != 2.

    From ``zhat = 2 z - s`` with ``s = sum(z)`` one gets
    ``sum(zhat) = (2 - k) s``, so ``s`` is recoverable whenever k != 2 and
    ``z = (zhat + s) / 2``.  At k = 2 the transform has a nontrivial kernel
    (constant rows) and no inverse exists.
    """
    Uhat = np.asarray(Uhat, dtype=np.float64)
    if Uhat.ndim != 2:
        raise ValueError("hat_inverse expects a state of shape (n, k)")
    k = Uhat.shape[1]
    if k == 2:
        raise ValueError("hat transform is singular at k = 2; no inverse exists")
    s = Uhat.sum(axis=1, keepdims=True) / (2.0 - k)
    return 0.5 * (Uhat + s)


def is_segregated(U, *, tol: float = 0.0) -> bool:
    """True when every row of ``U`` is nonnegative with at most one entry > tol."""
    U = np.asarray(U)
    if np.any(U < -tol):
        return False
    return bool(np.all((U > tol).sum(axis=1) <= 1))
