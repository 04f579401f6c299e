"""Estimator layer: transductive graph classifiers with the familiar
fit / predict / get_params surface.

All estimators share the semi-supervised convention: ``fit(X, y)`` takes
features (or a precomputed graph) together with integer targets where -1
marks the unlabeled points, solves over the whole graph, and exposes the
labels of every vertex as ``transduction_``.  These models do not extend
out of sample, so ``predict()`` takes no arguments.

>>> model = SegregationLearning(n_neighbors=10)
>>> model.fit(X, y)                # y has -1 on the unlabeled points
>>> model.transduction_            # predicted label per vertex
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import label_data_from_targets, resolve_graph
from .baselines import (LinearSolveConfig, decide_labels_argmax, laplace_learn,
                        poisson_learn)
from .relaxed import PenalizationConfig, epsilon_continuation, gradient_projection_solve
from .segregation import (SegregationConfig, decide_labels_segregation,
                          segregation_solve)

__all__ = [
    "LaplaceLearning",
    "PoissonLearning",
    "SegregationLearning",
    "GradientProjectionLearning",
    "PenalizedLearning",
    "transductive_accuracy",
]


def transductive_accuracy(y_true, y_pred, boundary) -> float:
    """Fraction of correct predictions over the unlabeled vertices only."""
    y_true = np.asarray(y_true).ravel()
    y_pred = np.asarray(y_pred).ravel()
    mask = np.ones(y_true.size, dtype=bool)
    mask[np.asarray(boundary, dtype=np.intp)] = False
    if not mask.any():
        raise ValueError("no unlabeled vertices to score")
    return float(np.mean(y_true[mask] == y_pred[mask]))


class _GraphSSLBase(BaseEstimator):
    """Shared fitting flow: build graph, solve, decide, map back to classes."""

    def __init__(self, graph="knn", n_neighbors=10, sigma=None, squared=False):
        self.graph = graph
        self.n_neighbors = n_neighbors
        self.sigma = sigma
        self.squared = squared

    def _solve(self, g, labels):
        raise NotImplementedError

    def _decide(self, U, g, labels):
        return decide_labels_argmax(U, labels)

    def fit(self, X, y):
        g = resolve_graph(X, graph=self.graph, n_neighbors=self.n_neighbors,
                          sigma=self.sigma, squared=self.squared)
        classes, labels = label_data_from_targets(y, g.n)
        U, report = self._solve(g, labels)
        internal = self._decide(U, g, labels)
        self.graph_ = g
        self.labels_ = labels
        self.classes_ = classes
        self.state_ = U
        self.report_ = report
        self.transduction_ = classes[internal]
        return self

    def predict(self):
        """Labels of every vertex of the fitted graph (transductive)."""
        check_is_fitted(self, "transduction_")
        return self.transduction_

    def fit_predict(self, X, y):
        return self.fit(X, y).transduction_


class LaplaceLearning(_GraphSSLBase):
    """Harmonic extension of the labels; classify by row argmax."""

    def __init__(self, graph="knn", n_neighbors=10, sigma=None, squared=False,
                 tol=1e-8, max_iter=None, method=None):
        super().__init__(graph, n_neighbors, sigma, squared)
        self.tol = tol
        self.max_iter = max_iter
        self.method = method

    def _solve(self, g, labels):
        cfg = LinearSolveConfig(tol=self.tol, max_iter=self.max_iter, method=self.method)
        return laplace_learn(g, labels, cfg)


class PoissonLearning(_GraphSSLBase):
    """Label sources minus their mean, propagated by the graph Laplacian."""

    def __init__(self, graph="knn", n_neighbors=10, sigma=None, squared=False,
                 tol=1e-8, max_iter=None, method=None):
        super().__init__(graph, n_neighbors, sigma, squared)
        self.tol = tol
        self.max_iter = max_iter
        self.method = method

    def _solve(self, g, labels):
        cfg = LinearSolveConfig(tol=self.tol, max_iter=self.max_iter, method=self.method)
        return poisson_learn(g, labels, cfg)


class SegregationLearning(_GraphSSLBase):
    """Competitive fixed-point scheme; classify by the positive class."""

    def __init__(self, graph="knn", n_neighbors=10, sigma=None, squared=False,
                 tol=1e-10, max_iter=None, damping=1.0):
        super().__init__(graph, n_neighbors, sigma, squared)
        self.tol = tol
        self.max_iter = max_iter
        self.damping = damping

    def _solve(self, g, labels):
        cfg = SegregationConfig(tol=self.tol, max_iter=self.max_iter,
                                damping=self.damping)
        return segregation_solve(g, labels, cfg)

    def _decide(self, U, g, labels):
        return decide_labels_segregation(U, g, labels)


class GradientProjectionLearning(_GraphSSLBase):
    """Projected averaging onto the segregated set."""

    def __init__(self, graph="knn", n_neighbors=10, sigma=None, squared=False,
                 tol=1e-10, max_iter=None):
        super().__init__(graph, n_neighbors, sigma, squared)
        self.tol = tol
        self.max_iter = max_iter

    def _solve(self, g, labels):
        return gradient_projection_solve(g, labels, tol=self.tol, max_iter=self.max_iter)

    def _decide(self, U, g, labels):
        return decide_labels_segregation(U, g, labels)


class PenalizedLearning(_GraphSSLBase):
    """Overlap penalization driven to the segregated limit by continuation."""

    def __init__(self, graph="knn", n_neighbors=10, sigma=None, squared=False,
                 epsilon_schedule=None, inner_tol=1e-10, outer_tol=1e-8,
                 max_outer=500):
        super().__init__(graph, n_neighbors, sigma, squared)
        self.epsilon_schedule = epsilon_schedule
        self.inner_tol = inner_tol
        self.outer_tol = outer_tol
        self.max_outer = max_outer

    def _solve(self, g, labels):
        cfg = PenalizationConfig(epsilon_schedule=self.epsilon_schedule,
                                 inner_tol=self.inner_tol,
                                 outer_tol=self.outer_tol,
                                 max_outer=self.max_outer)
        return epsilon_continuation(g, labels, cfg)

    def _decide(self, U, g, labels):
        return decide_labels_segregation(U, g, labels)
