"""Small named graphs with known solutions, and the built-in check suite.

These fixtures have closed-form answers worked out by hand, so they anchor
both the test suite and the ``graphseg verify`` subcommand:

* ``path_fixture``: path A-B-C-D, unit weights, A labeled class 1 and D
  class 2.  The competition fixed point is u1 = (1, 1/3, 0, 0) and
  u2 = (0, 0, 1/3, 1) (solve b = (1 - b)/2 - b/2... the 2x2 system gives
  b = 1/3).
* ``cycle_fixture``: 4-cycle A-B-C-D-A, unit weights, A labeled class 1
  and C class 2.  The l2 objective has exactly four minimizers at energy 3
  (interior value 1/2 assigned to either class at B and D); the
  segregation objective has the unique minimizer with zero interior at
  energy 2.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from .baselines import laplace_learn
from .graph import LabelData, WeightedGraph, hat_transform, l2_energy, laplacian_apply
from .relaxed import (PenalizationConfig, competition_map, gradient_projection_solve,
                      penalized_solve, project_segregated)
from .segregation import segregation_solve
from .verification import brute_force_minimize, check_max_principle, poincare_lambda1

__all__ = [
    "path_graph",
    "cycle_graph",
    "path_fixture",
    "cycle_fixture",
    "random_connected_graph",
    "random_labels",
    "verification_suite",
]


def path_graph(weights) -> WeightedGraph:
    """Path on len(weights)+1 vertices with the given edge weights."""
    w = np.asarray(weights, dtype=np.float64)
    n = w.size + 1
    rows = np.arange(n - 1)
    W = sparse.coo_matrix((w, (rows, rows + 1)), shape=(n, n)).tocsr()
    return WeightedGraph(W + W.T)


def cycle_graph(weights) -> WeightedGraph:
    """Cycle on len(weights) vertices; weight i joins vertex i and i+1 mod n."""
    w = np.asarray(weights, dtype=np.float64)
    n = w.size
    rows = np.arange(n)
    cols = (rows + 1) % n
    W = sparse.coo_matrix((w, (rows, cols)), shape=(n, n)).tocsr()
    return WeightedGraph(W.maximum(W.T))


def path_fixture():
    g = path_graph([1.0, 1.0, 1.0])
    labels = LabelData(boundary=[0, 3], labels=[0, 1])
    return g, labels


def cycle_fixture(weights=(1.0, 1.0, 1.0, 1.0)):
    g = cycle_graph(list(weights))
    labels = LabelData(boundary=[0, 2], labels=[0, 1])
    return g, labels


def random_connected_graph(rng: np.random.Generator, n: int,
                           extra_edges: int = 0) -> WeightedGraph:
    """Random spanning tree plus extra edges, weights in [0.5, 2)."""
    order = rng.permutation(n)
    rows = []
    cols = []
    for i in range(1, n):
        j = int(rng.integers(0, i))
        rows.append(order[i])
        cols.append(order[j])
    for _ in range(extra_edges):
        a, b = rng.integers(0, n, size=2)
        if a != b:
            rows.append(a)
            cols.append(b)
    w = rng.uniform(0.5, 2.0, size=len(rows))
    W = sparse.coo_matrix((w, (rows, cols)), shape=(n, n)).tocsr()
    return WeightedGraph(W.maximum(W.T))


def random_labels(rng: np.random.Generator, n: int, k: int,
                  per_class: int = 1) -> LabelData:
    """Distinct random labeled vertices, per_class of each of the k classes."""
    boundary = rng.choice(n, size=k * per_class, replace=False)
    labels = np.repeat(np.arange(k), per_class)
    return LabelData(boundary, labels, k=k)


def _close(a, b, tol) -> bool:
    return abs(a - b) <= tol


def verification_suite():
    """Fast end-to-end checks with hand-computed answers.

    Yields (name, ok, detail) triples; the CLI ``verify`` subcommand prints
    them and fails on any false entry.
    """
    checks = []
    rng = np.random.default_rng(20240817)

    g, labels = cycle_fixture()
    oracle = brute_force_minimize(g, labels, functional="l2")
    checks.append(("cycle l2 oracle: 4 minimizers at energy 3",
                   len(oracle.minimizers) == 4 and _close(oracle.minimum, 3.0, 1e-9),
                   f"found {len(oracle.minimizers)} at {oracle.minimum:.12f}"))

    oracle_seg = brute_force_minimize(g, labels, functional="segregation")
    only = oracle_seg.minimizers[0] if oracle_seg.minimizers else None
    seg_ok = (len(oracle_seg.minimizers) == 1
              and _close(oracle_seg.minimum, 2.0, 1e-9)
              and only is not None and np.all(only[[1, 3]] == 0.0))
    checks.append(("cycle segregation oracle: unique zero-interior minimizer at 2",
                   seg_ok, f"found {len(oracle_seg.minimizers)} at {oracle_seg.minimum:.12f}"))

    U, rep = segregation_solve(g, labels)
    checks.append(("cycle competition scheme reaches the zero-interior state",
                   rep.converged and float(np.abs(U[[1, 3]]).max()) == 0.0,
                   f"converged={rep.converged}"))

    Ugp, rep_gp = gradient_projection_solve(g, labels)
    checks.append(("cycle gradient projection reaches l2 energy 3",
                   rep_gp.converged and _close(l2_energy(g, Ugp), 3.0, 1e-6),
                   f"energy={l2_energy(g, Ugp):.9f}"))

    gp, lp = path_fixture()
    Up, rep_p = segregation_solve(gp, lp)
    checks.append(("path fixed point u1(B) = u2(C) = 1/3",
                   rep_p.converged and _close(Up[1, 0], 1.0 / 3.0, 1e-8)
                   and _close(Up[2, 1], 1.0 / 3.0, 1e-8),
                   f"u1(B)={Up[1, 0]:.10f}"))
    Uhat = hat_transform(Up)
    res = laplacian_apply(gp, Uhat)
    pos_ok = all(abs(res[x, i]) <= 1e-8 * gp.degrees[x]
                 for x in (1, 2) for i in range(2) if Up[x, i] > 0)
    int_ok = np.all(res[1:3] >= -1e-8 * gp.degrees[1:3, None])
    checks.append(("path limit system: hat functions harmonic on supports",
                   bool(pos_ok and int_ok), ""))

    g3 = path_graph([1.0, 1.0])
    l3 = LabelData(boundary=[0, 2], labels=[0, 1])
    Upen, rep_pen = penalized_solve(g3, l3, PenalizationConfig(epsilon=0.25),
                                    keep_history=True)
    h = rep_pen.history
    pen_ok = (_close(h[0][1, 0], 0.5, 1e-12)
              and _close(h[1][1, 0], 1.0 / 3.0, 1e-12)
              and _close(h[2][1, 0], 9.0 / 22.0, 1e-12))
    checks.append(("penalized path iterates hit 1/2, 1/3, 9/22",
                   pen_ok, f"got {h[0][1, 0]}, {h[1][1, 0]}, {h[2][1, 0]}"))

    two = path_graph([1.0])
    lam = poincare_lambda1(two, [0])
    checks.append(("two-vertex spectral constant equals 1",
                   _close(lam, 1.0, 1e-10), f"lambda1={lam}"))

    gr = random_connected_graph(rng, 12, extra_edges=6)
    lr = random_labels(rng, 12, 2)
    Uh, _ = laplace_learn(gr, lr)
    mp = check_max_principle(gr, lr.boundary, np.zeros(12), Uh[:, 0])
    checks.append(("harmonic solution satisfies the minimum principle",
                   mp.passed, mp.message))

    V = rng.normal(size=(200, 3))
    P = project_segregated(V)
    G = competition_map(np.abs(V))
    Pn = np.linalg.norm(project_segregated(np.abs(V)) - np.abs(V))
    Gn = np.linalg.norm(G - np.abs(V))
    checks.append(("projection beats the competition map, within factor k",
                   Pn <= Gn + 1e-12 and Gn <= 3 * Pn + 1e-12,
                   f"|P-u|={Pn:.6f} |G-u|={Gn:.6f}"))
    checks.append(("projection output is segregated",
                   bool(np.all(P >= 0) and np.all((P > 0).sum(axis=1) <= 1)), ""))

    return checks
