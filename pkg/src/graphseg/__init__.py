"""Graph-based semi-supervised learning by competitive segregation.

Label functions compete for vertices: each keeps its neighborhood average
minus the averages of all rivals, clipped at zero.  The fixed points
segregate the graph into per-class supports whose hat transforms are
harmonic, and on connected graphs the associated energy has a unique
minimizer.  Laplace and Poisson learning are included as baselines, along
with relaxation solvers (gradient projection, overlap penalization with
epsilon continuation), numerical verification tools, and a CLI harness.
"""

from .baselines import (LinearSolveConfig, SolveReport, decide_labels_argmax,
                        laplace_learn, poisson_learn)
from .build import (PointCloud, gaussian_weights, is_connected, knn_graph,
                    median_knn_distance)
from .datasets import (TrialSplit, csv_read, csv_write, load_idx, load_idx_pair,
                       make_moons, subset_by_class, trial_split, write_idx)
from .estimators import (GradientProjectionLearning, LaplaceLearning,
                         PenalizedLearning, PoissonLearning, SegregationLearning,
                         transductive_accuracy)
from .exceptions import ConfigError, DataFormatError
from .graph import (LabelData, WeightedGraph, average, cross_energy,
                    dirichlet_energy, hat_inverse, hat_transform, is_segregated,
                    l2_energy, laplacian_apply, segregation_energy)
from .relaxed import (PenalizationConfig, competition_map, epsilon_continuation,
                      gradient_projection_solve, overlap_penalty, penalized_solve,
                      project_segregated)
from .segregation import (SegregationConfig, decide_labels_segregation,
                          segregation_solve, segregation_step)
from .verification import (BruteForceResult, MaxPrincipleResult,
                           MinimizerPropertyReport, brute_force_minimize,
                           check_max_principle, check_minimizer_properties,
                           poincare_lambda1)

__version__ = "0.1.0"

__all__ = [
    "WeightedGraph", "LabelData", "laplacian_apply", "average",
    "dirichlet_energy", "cross_energy", "l2_energy", "segregation_energy",
    "hat_transform", "hat_inverse", "is_segregated",
    "PointCloud", "gaussian_weights", "knn_graph", "median_knn_distance",
    "is_connected",
    "make_moons", "load_idx", "write_idx", "load_idx_pair", "subset_by_class",
    "TrialSplit", "trial_split", "csv_read", "csv_write",
    "LinearSolveConfig", "SolveReport", "laplace_learn", "poisson_learn",
    "decide_labels_argmax",
    "SegregationConfig", "segregation_step", "segregation_solve",
    "decide_labels_segregation",
    "PenalizationConfig", "project_segregated", "competition_map",
    "gradient_projection_solve", "penalized_solve", "epsilon_continuation",
    "overlap_penalty",
    "poincare_lambda1", "check_max_principle", "check_minimizer_properties",
    "brute_force_minimize", "BruteForceResult", "MaxPrincipleResult",
    "MinimizerPropertyReport",
    "LaplaceLearning", "PoissonLearning", "SegregationLearning",
    "GradientProjectionLearning", "PenalizedLearning", "transductive_accuracy",
    "ConfigError", "DataFormatError",
]
