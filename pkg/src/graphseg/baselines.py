"""Harmonic (Laplace) and source-based (Poisson) label propagation.

Laplace learning extends the one-hot boundary values harmonically: each
class function solves ``L u = 0`` on the interior with ``u = phi`` on the
labeled set, minimizing the Dirichlet energy.  Poisson learning instead
solves ``L u = b`` on the whole graph, where ``b`` places ``y_i - ybar`` at
each labeled vertex (``ybar`` the mean one-hot label), normalized by the
degree-weighted zero-mean constraint per class.

Both accept a LinearSolveConfig choosing jacobi, gauss_seidel, or
conjugate_gradient kernels.  Convergence is measured per vertex relative to
degree: ``max_x |r(x)| / d(x) <= tol``.  The Jacobi sweep for the Poisson
system is damped by 1/2 (a lazy walk); the undamped sweep has iteration
matrix ``D^{-1} W`` whose -1 eigenvalue on bipartite graphs makes it
oscillate instead of converge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve_triangular

from .graph import LabelData, WeightedGraph, l2_energy, laplacian_apply

__all__ = [
    "LinearSolveConfig",
    "SolveReport",
    "laplace_learn",
    "poisson_learn",
    "decide_labels_argmax",
]

_METHODS = ("jacobi", "gauss_seidel", "conjugate_gradient")


@dataclass
class LinearSolveConfig:
    """Tolerance, iteration cap, and kernel for the linear solvers.

    ``max_iter=None`` resolves to ``10 n`` at call time.  ``method=None``
    picks the per-learner default: conjugate_gradient for Laplace, jacobi
    for Poisson.
    """

    tol: float = 1e-8
    max_iter: int | None = None
    method: str | None = None

    def resolved(self, n: int, default_method: str) -> tuple[float, int, str]:
        method = self.method or default_method
        if method not in _METHODS:
            raise ValueError(f"unknown method {method!r}; expected one of {_METHODS}")
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        max_iter = self.max_iter if self.max_iter is not None else 10 * n
        if max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        return float(self.tol), int(max_iter), method


@dataclass
class SolveReport:
    """What an iterative solve did: counts, final residual, optional traces."""

    iterations: int
    residual: float
    converged: bool
    method: str = ""
    energy_trace: list = field(default_factory=list)
    penalty_trace: list = field(default_factory=list)
    history: list | None = None


def _require_connected(g: WeightedGraph):
    if not g.connected:
        raise ValueError("graph is not connected; solvers require a connected graph")


def _interior_system(g: WeightedGraph, labels: LabelData):
    """Split W into interior block and boundary coupling for Dirichlet solves."""
    mask = labels.interior_mask(g.n)
    interior = np.flatnonzero(mask)
    W_int = g.W[interior][:, interior].tocsr()
    B = g.W[interior][:, labels.boundary] @ np.eye(labels.k)[labels.labels]
    return mask, interior, W_int, np.asarray(B), g.degrees[interior]


def _cg(matvec, b, d, tol, max_iter):
    """Conjugate gradient with per-vertex degree-scaled stopping rule."""
    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rs = float(r @ r)
    iterations = 0
    while np.max(np.abs(r) / d) > tol and iterations < max_iter:
        Ap = matvec(p)
        denom = float(p @ Ap)
        if denom <= 0.0:
            break
        alpha = rs / denom
        x += alpha * p
        r -= alpha * Ap
        rs_new = float(r @ r)
        p = r + (rs_new / rs) * p
        rs = rs_new
        iterations += 1
    return x, iterations


def _gauss_seidel_factors(W: sparse.csr_matrix, d: np.ndarray):
    """Lower-triangular sweep matrix D - W_low and the strictly upper part."""
    lower = sparse.tril(W, k=-1).tocsr()
    upper = sparse.triu(W, k=1).tocsr()
    M = (sparse.diags(d) - lower).tocsr()
    return M, upper


def laplace_learn(g: WeightedGraph, labels: LabelData,
                  cfg: LinearSolveConfig | None = None,
                  record_energy: bool = False):
    """Harmonic extension of the one-hot boundary values, one class per column.

    Returns ``(U, report)`` where ``U`` has shape (n, k), equals phi on the
    labeled set, and satisfies ``max_x |L u(x)| / d(x) <= tol`` on the
    interior when converged.  Non-convergence is reported, not raised.
    """
    _require_connected(g)
    cfg = cfg or LinearSolveConfig()
    tol, max_iter, method = cfg.resolved(g.n, "conjugate_gradient")
    U = labels.phi(g.n)
    mask, interior, W_int, B, d_int = _interior_system(g, labels)
    if interior.size == 0:
        return U, SolveReport(0, 0.0, True, method)

    trace = []
    X = np.zeros((interior.size, labels.k))
    if method == "conjugate_gradient":
        iterations = 0
        for c in range(labels.k):
            x, its = _cg(lambda v: d_int * v - W_int @ v, B[:, c], d_int, tol, max_iter)
            X[:, c] = x
            iterations = max(iterations, its)
            if record_energy:
                U[interior] = X
                trace.append(l2_energy(g, U))
    else:
        M, upper = _gauss_seidel_factors(W_int, d_int)
        iterations = 0
        while iterations < max_iter:
            R = B - (d_int[:, None] * X - W_int @ X)
            if np.max(np.abs(R) / d_int[:, None]) <= tol:
                break
            if method == "jacobi":
                X = (W_int @ X + B) / d_int[:, None]
            else:
                X = spsolve_triangular(M, upper @ X + B, lower=True)
            iterations += 1
            if record_energy:
                U[interior] = X
                trace.append(l2_energy(g, U))
    U[interior] = X
    res = float(np.max(np.abs(laplacian_apply(g, U)[interior]) / d_int[:, None]))
    return U, SolveReport(iterations, res, res <= tol, method, energy_trace=trace)


def _poisson_source(labels: LabelData, n: int) -> np.ndarray:
    onehot = np.eye(labels.k)[labels.labels]
    b = np.zeros((n, labels.k))
    b[labels.boundary] = onehot - onehot.mean(axis=0)
    return b


def _degree_project(U: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Remove the degree-weighted mean of each column."""
    return U - d @ U / d.sum()


def poisson_learn(g: WeightedGraph, labels: LabelData,
                  cfg: LinearSolveConfig | None = None,
                  record_energy: bool = False):
    """Solve ``L u = b`` with sources ``y_i - ybar`` at the labeled vertices.

    The solution is pinned down by the degree-weighted zero-mean constraint
    ``sum_x d(x) u_c(x) = 0`` for every class.  With a single class the
    source vanishes and the result is identically zero.
    """
    _require_connected(g)
    cfg = cfg or LinearSolveConfig()
    tol, max_iter, method = cfg.resolved(g.n, "jacobi")
    b = _poisson_source(labels, g.n)
    d = g.degrees
    trace = []
    U = np.zeros((g.n, labels.k))

    if method == "conjugate_gradient":
        # project the source onto the range of L (orthogonal to constants)
        b = b - b.mean(axis=0)
        iterations = 0
        for c in range(labels.k):
            x, its = _cg(lambda v: d * v - g.W @ v, b[:, c], d, tol, max_iter)
            U[:, c] = x
            iterations = max(iterations, its)
            if record_energy:
                trace.append(l2_energy(g, U))
    else:
        M, upper = _gauss_seidel_factors(g.W, d)
        iterations = 0
        while iterations < max_iter:
            R = b - laplacian_apply(g, U)
            if np.max(np.abs(R) / d[:, None]) <= tol:
                break
            if method == "jacobi":
                U = U + 0.5 * R / d[:, None]
            else:
                U = spsolve_triangular(M, upper @ U + b, lower=True)
            U = _degree_project(U, d)
            iterations += 1
            if record_energy:
                trace.append(l2_energy(g, U))
    U = _degree_project(U, d)
    res = float(np.max(np.abs(b - laplacian_apply(g, U)) / d[:, None]))
    return U, SolveReport(iterations, res, res <= tol, method, energy_trace=trace)


def decide_labels_argmax(U: np.ndarray, labels: LabelData) -> np.ndarray:
    """Zero-based class per vertex: row argmax, ties to the smallest index.

    Labeled vertices keep their given class regardless of the state.
    (Classes are presented one-based in human-facing output only.)
    """
    U = np.asarray(U, dtype=np.float64)
    decided = np.argmax(U, axis=1).astype(np.intp)
    decided[labels.boundary] = labels.labels
    return decided
