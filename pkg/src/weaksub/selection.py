"""scikit-learn facade: matroid-constrained greedy feature selection.

Wraps the selection algorithms as an estimator with the usual
fit/transform surface so they compose with pipelines and model selection.
Only the supervised feature-selection objectives are exposed this way; the
oracle-level API in :mod:`weaksub.algorithms` remains the primary surface.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_is_fitted, check_X_y

from .algorithms import random_baseline, residual_random_greedy, standard_greedy
from .matroids import Matroid, UniformMatroid
from .objectives import (
    LogisticProblem,
    RegressionProblem,
    least_squares_loglik,
    logistic_loglik,
)

__all__ = ["GreedyMatroidSelector"]


class GreedyMatroidSelector(SelectorMixin, BaseEstimator):
    """Select feature columns forming an independent set of a matroid.

    Parameters
    ----------
    matroid : Matroid or None
        Constraint over column indices. When None, a uniform matroid of
        rank ``n_features_to_select`` is used.
    n_features_to_select : int or None
        Rank of the default uniform matroid; ignored when ``matroid`` is
        given.
    objective : {"least-squares", "logistic"}
        Set function scored on (X, y): normalized regression or logistic
        log-likelihood of the best coefficients supported on the subset.
    algorithm : {"rrg", "greedy", "random"}
        Residual random greedy, deterministic greedy, or the random-base
        baseline.
    ridge : float
        Ridge weight for the logistic objective.
    random_state : int or None
        Seed for the randomized algorithms.

    Attributes
    ----------
    support_ : bool array of shape (n_features,)
    selected_ : sorted tuple of selected column indices
    trace_ : RunTrace of the underlying run
    """

    def __init__(
        self,
        matroid: Matroid | None = None,
        n_features_to_select: int | None = None,
        objective: str = "least-squares",
        algorithm: str = "rrg",
        ridge: float = 1e-6,
        random_state: int | None = None,
    ):
        self.matroid = matroid
        self.n_features_to_select = n_features_to_select
        self.objective = objective
        self.algorithm = algorithm
        self.ridge = ridge
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float)
        n_features = X.shape[1]
        if self.matroid is not None:
            matroid = self.matroid
            if matroid.n != n_features:
                raise ValueError(
                    f"matroid ground set ({matroid.n}) must match the "
                    f"number of features ({n_features})"
                )
        elif self.n_features_to_select is not None:
            matroid = UniformMatroid(n_features, int(self.n_features_to_select))
        else:
            raise ValueError("provide a matroid or n_features_to_select")

        if self.objective == "least-squares":
            oracle = least_squares_loglik(RegressionProblem(X, y))
        elif self.objective == "logistic":
            oracle = logistic_loglik(LogisticProblem(X, y, ridge=self.ridge))
        else:
            raise ValueError(f"unknown objective {self.objective!r}")

        rng = np.random.default_rng(self.random_state)
        if self.algorithm == "rrg":
            trace = residual_random_greedy(oracle, matroid, rng)
        elif self.algorithm == "greedy":
            trace = standard_greedy(oracle, matroid)
        elif self.algorithm == "random":
            trace = random_baseline(matroid, oracle, rng)
        else:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")

        self.n_features_in_ = n_features
        self.trace_ = trace
        self.selected_ = tuple(sorted(trace.final_set))
        mask = np.zeros(n_features, dtype=bool)
        mask[list(self.selected_)] = True
        self.support_ = mask
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "support_")
        return self.support_
