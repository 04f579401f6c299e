"""Numerical checks backing the solvers: spectral bounds, comparison
principles, optimality conditions, and an exhaustive grid oracle.

The oracle enumerates every segregated candidate on a value grid, which is
slow but has no shared assumptions with the solvers; acceptance tests
compare solver output against it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from .graph import (LabelData, WeightedGraph, l2_energy, laplacian_apply,
                    segregation_energy)

__all__ = [
    "poincare_lambda1",
    "MaxPrincipleResult",
    "check_max_principle",
    "MinimizerPropertyReport",
    "check_minimizer_properties",
    "BruteForceResult",
    "brute_force_minimize",
]


def poincare_lambda1(g: WeightedGraph, boundary, rel_tol: float = 1e-10,
                     max_iter: int = 100000) -> float:
    """Best constant with ``lambda1 * ||u|| <= ||grad u||`` for u = 0 on Gamma.

    Equals the square root of the smallest eigenvalue of the Laplacian
    restricted to the interior, found by inverse power iteration on a
    sparse factorization.  Adding vertices to the boundary never decreases
    the constant.  An empty interior returns infinity (the bound is vacuous).
    """
    boundary = np.asarray(boundary, dtype=np.intp).ravel()
    if boundary.size == 0:
        raise ValueError("boundary must be nonempty")
    mask = np.ones(g.n, dtype=bool)
    mask[boundary] = False
    interior = np.flatnonzero(mask)
    if interior.size == 0:
        return math.inf
    W_int = g.W[interior][:, interior].tocsc()
    L_int = sparse.diags(g.degrees[interior]) - W_int
    lu = splu(L_int.tocsc())
    x = np.ones(interior.size)
    lam = 0.0
    for _ in range(max_iter):
        y = lu.solve(x)
        y /= np.linalg.norm(y)
        lam_new = float(y @ (g.degrees[interior] * y - W_int @ y))
        if abs(lam_new - lam) <= rel_tol * abs(lam_new):
            lam = lam_new
            break
        lam = lam_new
        x = y
    return math.sqrt(lam)


@dataclass(frozen=True)
class MaxPrincipleResult:
    """Outcome of a comparison-principle check."""

    status: str  # "pass", "fail", or "hypothesis_violated"
    vertex: int | None = None
    value: float | None = None
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def check_max_principle(g: WeightedGraph, boundary, p, u,
                        hyp_tol: float = 1e-12,
                        tol: float = 1e-10) -> MaxPrincipleResult:
    """Verify: if ``L u + p u >= 0`` inside, ``p >= 0``, and ``u >= 0`` on the
    boundary, then ``u >= 0`` everywhere.

    The hypothesis is verified numerically first (within ``hyp_tol``); when
    it does not hold the result says so instead of blaming the principle.
    """
    boundary = np.asarray(boundary, dtype=np.intp).ravel()
    p = np.asarray(p, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    mask = np.ones(g.n, dtype=bool)
    mask[boundary] = False
    if np.any(p < -hyp_tol):
        v = int(np.argmin(p))
        return MaxPrincipleResult("hypothesis_violated", v, float(p[v]),
                                  f"p({v}) = {p[v]:.3e} < 0")
    if boundary.size and np.min(u[boundary]) < -hyp_tol:
        idx = boundary[int(np.argmin(u[boundary]))]
        return MaxPrincipleResult("hypothesis_violated", int(idx), float(u[idx]),
                                  f"u({idx}) = {u[idx]:.3e} < 0 on the boundary")
    residual = laplacian_apply(g, u) + p * u
    inside = np.flatnonzero(mask)
    if inside.size and np.min(residual[inside]) < -hyp_tol:
        v = int(inside[np.argmin(residual[inside])])
        return MaxPrincipleResult("hypothesis_violated", v, float(residual[v]),
                                  f"(L u + p u)({v}) = {residual[v]:.3e} < 0")
    if np.min(u) >= -tol:
        return MaxPrincipleResult("pass")
    v = int(np.argmin(u))
    return MaxPrincipleResult("fail", v, float(u[v]),
                              f"u({v}) = {u[v]:.3e} violates the minimum principle")


@dataclass(frozen=True)
class MinimizerPropertyReport:
    """First-order optimality of a segregated state.

    ``zero_set_ok``: L u_i <= tol * d wherever u_i = 0.
    ``support_harmonic_ok``: |L u_i| <= tol * d on interior vertices with
    u_i > 0.  ``covered``: every interior vertex carries some positive class
    (advisory; interfaces may legitimately be uncovered).
    """

    zero_set_ok: bool
    support_harmonic_ok: bool
    covered: bool
    max_zero_set_violation: float
    max_support_violation: float

    @property
    def passed(self) -> bool:
        # coverage is advisory and does not gate the check
        return self.zero_set_ok and self.support_harmonic_ok


def check_minimizer_properties(g: WeightedGraph, labels: LabelData,
                               U: np.ndarray, tol: float = 1e-8) -> MinimizerPropertyReport:
    U = np.asarray(U, dtype=np.float64)
    LU = laplacian_apply(g, U)
    d = g.degrees[:, None]
    interior = labels.interior_mask(g.n)

    zero = U == 0.0
    # where a class vanishes, its Laplacian is -sum w u <= 0 (any vertex)
    zero_viol = float(np.max(LU[zero] / np.broadcast_to(d, U.shape)[zero],
                             initial=0.0))
    pos = (U > 0.0) & interior[:, None]
    supp_viol = float(np.max(np.abs(LU[pos]) / np.broadcast_to(d, U.shape)[pos],
                             initial=0.0))
    covered = bool(np.all(U[interior].sum(axis=1) > 0.0)) if interior.any() else True
    return MinimizerPropertyReport(
        zero_set_ok=zero_viol <= tol,
        support_harmonic_ok=supp_viol <= tol,
        covered=covered,
        max_zero_set_violation=zero_viol,
        max_support_violation=supp_viol,
    )


@dataclass
class BruteForceResult:
    """Global grid minimum and every grid state attaining it."""

    minimum: float
    minimizers: list = field(default_factory=list)
    states_scanned: int = 0


def _quadratic_coefficients(energy, base: np.ndarray, slots) -> tuple:
    """Fit J(t) = c0 + b.t + t'Q t exactly from energy evaluations.

    ``slots`` maps each variable to its (vertex, class) entry; the energy is
    quadratic in those entries, so 1 + 2v + v(v-1)/2 evaluations determine it.
    """
    v = len(slots)

    def evaluate(t):
        U = base.copy()
        for (vertex, cls), val in zip(slots, t):
            U[vertex, cls] = val
        return energy(U)

    c0 = evaluate(np.zeros(v))
    b = np.zeros(v)
    Q = np.zeros((v, v))
    for i in range(v):
        e1 = np.zeros(v)
        e1[i] = 1.0
        j1 = evaluate(e1)
        e2 = np.zeros(v)
        e2[i] = 2.0
        j2 = evaluate(e2)
        Q[i, i] = (j2 - 2.0 * j1 + c0) / 2.0
        b[i] = j1 - c0 - Q[i, i]
    for i in range(v):
        for j in range(i + 1, v):
            e = np.zeros(v)
            e[i] = 1.0
            e[j] = 1.0
            jij = evaluate(e)
            Q[i, j] = Q[j, i] = (jij - c0 - b[i] - b[j] - Q[i, i] - Q[j, j]) / 2.0
    return c0, b, Q


def _pattern_grid_min(c0, b, Q, grid):
    """Minimum of the fitted quadratic over the value grid, plus argmin."""
    v = len(b)
    shape = [len(grid)] * v
    E = np.full(shape, c0)
    for i in range(v):
        axis = grid.reshape([-1 if a == i else 1 for a in range(v)])
        E = E + b[i] * axis + Q[i, i] * axis * axis
        for j in range(i + 1, v):
            axis_j = grid.reshape([-1 if a == j else 1 for a in range(v)])
            E = E + 2.0 * Q[i, j] * axis * axis_j
    flat = int(np.argmin(E))
    return float(E.min()), flat, E


def brute_force_minimize(g: WeightedGraph, labels: LabelData,
                         grid_step: float = 1.0 / 64.0,
                         functional: str = "l2",
                         atol: float = 1e-9) -> BruteForceResult:
    """Exhaustive grid search over segregated states.

    Per interior vertex, the candidates are: no class, or one class with a
    value from the grid ``(0, 1]`` in steps of ``grid_step``; boundary rows
    are one-hot.  Returns the minimum of the chosen functional (``"l2"`` or
    ``"segregation"``) and every grid state within ``atol`` of it.  Limited
    to at most 4 interior vertices and 3 classes; independent of all solver
    code by construction.
    """
    if functional == "l2":
        energy = lambda U: l2_energy(g, U)
    elif functional == "segregation":
        energy = lambda U: segregation_energy(g, U)
    else:
        raise ValueError("functional must be 'l2' or 'segregation'")
    interior = np.flatnonzero(labels.interior_mask(g.n))
    if interior.size > 4:
        raise ValueError("brute force is limited to at most 4 interior vertices")
    if labels.k > 3:
        raise ValueError("brute force is limited to at most 3 classes")
    steps = round(1.0 / grid_step)
    if abs(steps * grid_step - 1.0) > 1e-12:
        raise ValueError("grid_step must divide 1")
    grid = np.arange(1, steps + 1) * grid_step
    base = labels.phi(g.n)

    def pattern_slots(pattern):
        return [(interior[i], cls - 1) for i, cls in enumerate(pattern) if cls > 0]

    # first pass: per-pattern minimum only (the full grids are too large to keep)
    patterns = list(itertools.product(range(labels.k + 1), repeat=interior.size))
    minima = []
    scanned = 0
    for pattern in patterns:
        slots = pattern_slots(pattern)
        if not slots:
            minima.append(energy(base))
            scanned += 1
            continue
        c0, b, Q = _quadratic_coefficients(energy, base, slots)
        emin, _, E = _pattern_grid_min(c0, b, Q, grid)
        minima.append(emin)
        scanned += E.size
        del E

    best = min(minima)
    # second pass: rebuild the grids only for patterns that attain the minimum
    minimizers = []
    for pattern, emin in zip(patterns, minima):
        if emin > best + atol:
            continue
        slots = pattern_slots(pattern)
        if not slots:
            minimizers.append(base.copy())
            continue
        c0, b, Q = _quadratic_coefficients(energy, base, slots)
        _, _, E = _pattern_grid_min(c0, b, Q, grid)
        for idx in np.flatnonzero(E.ravel() <= best + atol):
            coords = np.unravel_index(idx, E.shape)
            U = base.copy()
            for (vertex, cls), ci in zip(slots, coords):
                U[vertex, cls] = grid[ci]
            minimizers.append(U)
    return BruteForceResult(minimum=best, minimizers=minimizers,
                            states_scanned=scanned)
