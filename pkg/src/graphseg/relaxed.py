"""Relaxations: gradient projection onto segregated states and penalization.

The segregated set S holds nonnegative states with disjoint supports and
one-hot boundary rows.  ``project_segregated`` maps any state to its
closest point in S: per vertex, keep the positive part of the largest
positive entry (smallest index on ties) and zero the rest.

Gradient projection iterates ``U <- P(A U)``, so every iterate lies in S
exactly and the l2 energy trace is observable.

Penalization softens the disjointness constraint with a quadratic overlap
penalty of scale ``1/epsilon``.  For fixed epsilon, the alternating scheme
solves, per class, the linear problem

    L u_i + (u_i / epsilon) sum_{j != i} u_{j,prev}^2 = 0

starting from the harmonic extension; each inner problem yields to the
closed-form Jacobi update ``u(x) <- (sum_y w_xy u(y)) / (d(x) + p(x))``.
Successive outer iterates interleave monotonically (even iterates decrease,
odd ones increase, all within [0, 1]) and converge to the penalized
solution.  ``epsilon_continuation`` then drives epsilon to zero along a
schedule with warm starts and projects the final state into S.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .baselines import LinearSolveConfig, SolveReport, _require_connected, laplace_learn
from .graph import LabelData, WeightedGraph, average, l2_energy, laplacian_apply

__all__ = [
    "PenalizationConfig",
    "project_segregated",
    "competition_map",
    "gradient_projection_solve",
    "penalized_solve",
    "epsilon_continuation",
    "overlap_penalty",
]


def _set_boundary(U: np.ndarray, labels: LabelData | None) -> np.ndarray:
    if labels is not None:
        U[labels.boundary] = 0.0
        U[labels.boundary, labels.labels] = 1.0
    return U


def project_segregated(V: np.ndarray, labels: LabelData | None = None) -> np.ndarray:
    """Closest point of the segregated set: per row keep one positive part.

    The winner is the class with the largest positive part (smallest index
    on ties); rows with no positive entry become zero.  With ``labels``
    given, boundary rows are set to their one-hot values.
    """
    V = np.asarray(V, dtype=np.float64)
    if V.ndim != 2:
        raise ValueError("expected a state of shape (n, k)")
    pos = np.maximum(V, 0.0)
    winner = np.argmax(pos, axis=1)
    out = np.zeros_like(pos)
    rows = np.arange(V.shape[0])
    out[rows, winner] = pos[rows, winner]
    return _set_boundary(out, labels)


def competition_map(U: np.ndarray, labels: LabelData | None = None) -> np.ndarray:
    """Subtract competitors and clip: ``v_i = max(u_i - sum_{j != i} u_j, 0)``.

    Defined for nonnegative input only; the output is always segregated and
    within a factor k of the true projection in distance.
    """
    U = np.asarray(U, dtype=np.float64)
    if U.ndim != 2:
        raise ValueError("expected a state of shape (n, k)")
    if U.min() < 0:
        raise ValueError("competition_map requires nonnegative input")
    k = U.shape[1]
    competitors = U @ (np.ones((k, k)) - np.eye(k))
    V = np.maximum(U - competitors, 0.0)
    return _set_boundary(V, labels)


def gradient_projection_solve(g: WeightedGraph, labels: LabelData,
                              tol: float = 1e-10,
                              max_iter: int | None = None):
    """Iterate ``U <- P(A U)`` from the one-hot boundary state.

    Every iterate lies in the segregated set exactly.  Returns the state
    and a report whose ``energy_trace`` holds the l2 energy of every
    iterate; at a fixed point, positive entries equal their neighborhood
    average and dominate all competitors' averages.
    """
    _require_connected(g)
    max_iter = max_iter if max_iter is not None else 100 * g.n
    U = labels.phi(g.n)
    trace = [l2_energy(g, U)]
    iterations = 0
    converged = False
    while iterations < max_iter:
        V = project_segregated(average(g, U), labels)
        change = float(np.max(np.abs(V - U)))
        U = V
        iterations += 1
        trace.append(l2_energy(g, U))
        if change <= tol:
            converged = True
            break
    residual = float(np.max(np.abs(project_segregated(average(g, U), labels) - U)))
    return U, SolveReport(iterations, residual, converged, "gradient_projection",
                          energy_trace=trace)


@dataclass
class PenalizationConfig:
    """Controls for the penalized solves.

    ``epsilon`` is the penalty scale of a single solve; ``epsilon_schedule``
    (when set, or by default in :func:`epsilon_continuation`) is the
    decreasing sequence used for continuation.  Inner Jacobi sweeps run to
    ``inner_tol``; the outer loop stops when the penalized system residual
    ``max |L u_i + (u_i/eps) sum_{j != i} u_j^2|`` falls to ``outer_tol``.
    """

    epsilon: float = 0.25
    epsilon_schedule: list | None = None
    inner_tol: float = 1e-10
    outer_tol: float = 1e-8
    max_outer: int = 500
    max_inner: int | None = None

    def schedule(self) -> list:
        if self.epsilon_schedule is not None:
            sched = [float(e) for e in self.epsilon_schedule]
        else:
            sched = [0.25 ** s for s in range(10)]
        if not sched or any(e <= 0 for e in sched):
            raise ValueError("epsilon schedule must be nonempty and positive")
        if any(b >= a for a, b in zip(sched, sched[1:])):
            raise ValueError("epsilon schedule must be strictly decreasing")
        return sched


def overlap_penalty(U: np.ndarray) -> float:
    """Penalty magnitude ``sum_{i != j} (u_i^2, u_j^2)`` over ordered pairs."""
    sq = np.asarray(U, dtype=np.float64) ** 2
    total = sq.sum(axis=1)
    return float((total * total - (sq * sq).sum(axis=1)).sum())


def harmonic_start(g: WeightedGraph, labels: LabelData, tol: float = 1e-10):
    """Harmonic extension used as the initial penalized iterate."""
    U0, report = laplace_learn(
        g, labels, LinearSolveConfig(tol=tol, method="conjugate_gradient"))
    if not report.converged:
        raise RuntimeError("harmonic extension did not converge")
    return U0


def _inner_jacobi(W_rows, interior, d, u, p, tol, max_iter):
    """Solve (L + diag(p)) u = 0 on the interior with fixed boundary rows.

    Closed-form sweep: u(x) <- (sum_y w_xy u(y)) / (d(x) + p(x)).  The stop
    rule max |next - current| <= tol equals the scaled residual
    |L u + p u| / (d + p) of the current iterate.
    """
    if interior.size == 0:
        return u.copy()
    u = u.copy()
    denom = d[interior] + p[interior]
    for _ in range(max_iter):
        nxt = (W_rows @ u) / denom
        change = float(np.max(np.abs(nxt - u[interior])))
        u[interior] = nxt
        if change <= tol:
            break
    return u


def _penalized_residual(g, labels, U, epsilon, interior):
    sq = U ** 2
    total = sq.sum(axis=1, keepdims=True)
    P = (total - sq) / epsilon
    R = laplacian_apply(g, U) + U * P
    return float(np.max(np.abs(R[interior]))) if interior.size else 0.0


def penalized_solve(g: WeightedGraph, labels: LabelData,
                    cfg: PenalizationConfig | None = None,
                    U0: np.ndarray | None = None,
                    keep_history: bool = False,
                    record_energy: bool = False):
    """Alternating scheme for the overlap-penalized system at fixed epsilon.

    Starts from the harmonic extension (or ``U0`` for warm starts).  Each
    outer step freezes the competitor squares of the previous iterate and
    solves the resulting decoupled linear problems by the closed-form
    Jacobi sweep.  The report's ``penalty_trace`` holds the overlap penalty
    per outer iterate; ``history`` (opt-in) the outer iterates themselves.
    """
    _require_connected(g)
    cfg = cfg or PenalizationConfig()
    epsilon = float(cfg.epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    max_inner = cfg.max_inner if cfg.max_inner is not None else 100 * g.n
    interior = np.flatnonzero(labels.interior_mask(g.n))
    W_rows = g.W[interior]
    U = harmonic_start(g, labels, cfg.inner_tol) if U0 is None else np.array(U0, dtype=np.float64)
    if U.shape != (g.n, labels.k):
        raise ValueError(f"U0 must have shape {(g.n, labels.k)}")
    _set_boundary(U, labels)

    history = [U.copy()] if keep_history else None
    penalty_trace = [overlap_penalty(U)]
    energy_trace = [l2_energy(g, U)] if record_energy else []
    iterations = 0
    converged = False
    residual = _penalized_residual(g, labels, U, epsilon, interior)
    while iterations < cfg.max_outer:
        if residual <= cfg.outer_tol:
            converged = True
            break
        sq = U ** 2
        total = sq.sum(axis=1, keepdims=True)
        V = np.empty_like(U)
        for c in range(labels.k):
            p = (total[:, 0] - sq[:, c]) / epsilon
            V[:, c] = _inner_jacobi(W_rows, interior, g.degrees, U[:, c], p,
                                    cfg.inner_tol, max_inner)
        U = _set_boundary(V, labels)
        iterations += 1
        penalty_trace.append(overlap_penalty(U))
        if record_energy:
            energy_trace.append(l2_energy(g, U))
        if keep_history:
            history.append(U.copy())
        residual = _penalized_residual(g, labels, U, epsilon, interior)
    report = SolveReport(iterations, residual, converged, "penalized",
                         energy_trace=energy_trace, penalty_trace=penalty_trace,
                         history=history)
    return U, report


def epsilon_continuation(g: WeightedGraph, labels: LabelData,
                         cfg: PenalizationConfig | None = None,
                         record_energy: bool = False):
    """Drive epsilon to zero along a decreasing schedule with warm starts.

    Each stage solves the penalized system at its epsilon starting from the
    previous stage's state; the final state is projected into the
    segregated set.  The report's ``penalty_trace`` holds the overlap
    penalty at the end of each stage (decreasing along the schedule) and
    ``energy_trace`` the per-stage l2 energy.
    """
    _require_connected(g)
    cfg = cfg or PenalizationConfig()
    schedule = cfg.schedule()
    U = harmonic_start(g, labels, cfg.inner_tol)
    penalty_trace = []
    energy_trace = []
    total_outer = 0
    all_converged = True
    residual = np.inf
    for eps in schedule:
        stage_cfg = PenalizationConfig(
            epsilon=eps, inner_tol=cfg.inner_tol, outer_tol=cfg.outer_tol,
            max_outer=cfg.max_outer, max_inner=cfg.max_inner)
        U, rep = penalized_solve(g, labels, stage_cfg, U0=U)
        total_outer += rep.iterations
        all_converged = all_converged and rep.converged
        residual = rep.residual
        penalty_trace.append(overlap_penalty(U))
        energy_trace.append(l2_energy(g, U))
    U = project_segregated(U, labels)
    if record_energy:
        energy_trace.append(l2_energy(g, U))
    return U, SolveReport(total_outer, residual, all_converged, "continuation",
                          energy_trace=energy_trace, penalty_trace=penalty_trace)
