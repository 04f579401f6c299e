"""Poincare constant, maximum principle harness, and brute-force oracles."""

import math

import numpy as np
import pytest

from graphseg import (
    LabelData,
    LinearSolveConfig,
    WeightedGraph,
    brute_force_minimize,
    check_max_principle,
    check_minimizer_properties,
    dirichlet_energy,
    laplace_learn,
    poincare_lambda1,
)
from graphseg.fixtures import (
    cycle_graph,
    path_graph,
    random_connected_graph,
    random_labels,
    verification_suite,
)

# ---------------------------------------------------------------- poincare


def test_poincare_two_vertex_path():
    g = path_graph([1.0])
    lam = poincare_lambda1(g, np.array([0]))
    assert lam == pytest.approx(1.0, abs=1e-10)
    # equality witness u = (0, 1)
    u = np.array([0.0, 1.0])
    assert math.sqrt(dirichlet_energy(g, u)) == pytest.approx(lam * np.linalg.norm(u))


def test_poincare_weight_scaling():
    rng = np.random.default_rng(2)
    g = random_connected_graph(rng, 10, extra_edges=6)
    boundary = np.array([0, 4])
    lam = poincare_lambda1(g, boundary)
    c = 3.0
    g_scaled = WeightedGraph(g.W * c**2)
    assert poincare_lambda1(g_scaled, boundary) == pytest.approx(c * lam, rel=1e-8)


def test_poincare_monotone_in_boundary():
    rng = np.random.default_rng(10)
    for _ in range(5):
        n = int(rng.integers(6, 20))
        g = random_connected_graph(rng, n, extra_edges=n)
        verts = rng.permutation(n)
        lam_prev = 0.0
        for size in (1, 2, 4):
            lam = poincare_lambda1(g, verts[:size])
            assert lam >= lam_prev - 1e-10
            lam_prev = lam


def test_poincare_full_boundary_is_infinite():
    g = path_graph([1.0, 1.0])
    assert poincare_lambda1(g, np.arange(3)) == math.inf


def test_poincare_requires_boundary():
    g = path_graph([1.0, 1.0])
    with pytest.raises(ValueError):
        poincare_lambda1(g, np.array([], dtype=int))


def test_poincare_inequality_on_random_functions():
    rng = np.random.default_rng(55)
    g = random_connected_graph(rng, 25, extra_edges=20)
    boundary = np.array([1, 7, 12])
    lam = poincare_lambda1(g, boundary)
    for _ in range(200):
        u = rng.standard_normal(25)
        u[boundary] = 0.0
        assert lam * np.linalg.norm(u) <= math.sqrt(dirichlet_energy(g, u)) + 1e-10


# ----------------------------------------------------------- max principle


def test_max_principle_harmonic_pass(path4):
    g, labels = path4
    U, _ = laplace_learn(g, labels, LinearSolveConfig(tol=1e-12))
    res = check_max_principle(g, labels.boundary, np.zeros(g.n), U[:, 0])
    assert res.passed
    assert res.status == "pass"


def test_max_principle_hypothesis_violation_detected():
    g = path_graph([1.0, 1.0])
    u = np.full(3, -1.0)
    res = check_max_principle(g, np.array([0, 2]), np.zeros(3), u)
    assert res.status == "hypothesis_violated"
    assert not res.passed
    assert "boundary" in res.message


def test_max_principle_interior_pde_hypothesis():
    # interior L u + p u must be nonnegative for the check to even apply
    g = path_graph([1.0, 1.0])
    u = np.array([0.0, -1e-3, 0.0])
    res = check_max_principle(g, np.array([0, 2]), np.zeros(3), u)
    assert res.status == "hypothesis_violated"


def test_max_principle_reports_vertex_on_violation():
    g = path_graph([1.0, 1.0])
    u = np.array([0.0, -5.0, 1.0])
    res = check_max_principle(g, np.array([0, 2]), np.zeros(3), u)
    assert res.vertex is not None


# ------------------------------------------------- minimizer property check


def test_minimizer_properties_remark_state(cycle4):
    g, labels = cycle4
    U = np.column_stack([[1.0, 0.5, 0.0, 0.5], [0.0, 0.0, 1.0, 0.0]])
    report = check_minimizer_properties(g, labels, U)
    assert report.zero_set_ok
    assert report.support_harmonic_ok
    assert report.covered
    assert report.passed


def test_minimizer_properties_zero_interior(cycle4):
    g, labels = cycle4
    U = np.column_stack([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]])
    report = check_minimizer_properties(g, labels, U)
    assert report.passed  # coverage is advisory, the hard conditions hold
    assert not report.covered


def test_minimizer_properties_harmonic_single_class():
    rng = np.random.default_rng(31)
    g = random_connected_graph(rng, 12, extra_edges=8)
    labels = random_labels(rng, 12, 1, per_class=2)
    U, _ = laplace_learn(g, labels, LinearSolveConfig(tol=1e-12))
    report = check_minimizer_properties(g, labels, U)
    assert report.support_harmonic_ok


# ------------------------------------------------------------ brute force


def test_brute_force_path3_two_minimizers(path3):
    g, labels = path3
    result = brute_force_minimize(g, labels, functional="l2")
    assert result.minimum == pytest.approx(1.5, abs=1e-9)
    assert len(result.minimizers) == 2
    mids = sorted((m[1, 0], m[1, 1]) for m in result.minimizers)
    assert mids[0] == pytest.approx((0.0, 0.5))
    assert mids[1] == pytest.approx((0.5, 0.0))


def test_brute_force_cycle_l2_four_minimizers(cycle4):
    g, labels = cycle4
    result = brute_force_minimize(g, labels, functional="l2")
    assert result.minimum == pytest.approx(3.0, abs=1e-9)
    assert len(result.minimizers) == 4
    patterns = set()
    for m in result.minimizers:
        key = []
        for v in (1, 3):  # interior vertices B, D
            nz = np.flatnonzero(m[v] > 0)
            assert m[v][nz] == pytest.approx(0.5)
            key.append(int(nz[0]))
        patterns.add(tuple(key))
    # all four class assignments of B and D appear
    assert patterns == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_brute_force_cycle_segregation_unique(cycle4):
    g, labels = cycle4
    result = brute_force_minimize(g, labels, functional="segregation")
    assert result.minimum == pytest.approx(2.0, abs=1e-9)
    assert len(result.minimizers) == 1
    assert np.max(np.abs(result.minimizers[0][[1, 3]])) == 0.0


def test_brute_force_instance_limits():
    rng = np.random.default_rng(0)
    g = random_connected_graph(rng, 9, extra_edges=4)
    labels = random_labels(rng, 9, 2)  # leaves more than 4 interior vertices
    with pytest.raises(ValueError):
        brute_force_minimize(g, labels)


def test_brute_force_rejects_unknown_functional(path3):
    g, labels = path3
    with pytest.raises(ValueError):
        brute_force_minimize(g, labels, functional="entropy")


# ----------------------------------------------------------------- suite


def test_builtin_verification_suite_all_pass():
    results = list(verification_suite())
    assert len(results) >= 10
    failed = [name for name, ok, _ in results if not ok]
    assert failed == []
