"""scikit-learn compatible wrappers around the exact solvers.

``fit`` either finds a network that reproduces every training label
exactly or raises :class:`NoExactFitError`.  Predictions are object
arrays of :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .convexfit import SearchLog, exact_fit_concave, exact_fit_convex
from .nets import Activation, Instance, LabeledPoint
from .oracle import brute_force_fit_lt, brute_force_fit_relu
from .validation import check_n_features, check_rational_array, check_rational_X_y


class NoExactFitError(ValueError):
    """No network of the requested size reproduces the training data."""


class _ExactFitBase(RegressorMixin, BaseEstimator):
    activation = Activation.RELU

    def _solve(self, instance):
        raise NotImplementedError

    def fit(self, X, y):
        X, y = check_rational_X_y(X, y)
        if self.n_units < 1:
            raise ValueError(f"n_units must be positive, got {self.n_units}")
        points = [LabeledPoint(tuple(row), label) for row, label in zip(X, y)]
        instance = Instance(X.shape[1], points, self.n_units, activation=self.activation)
        net = self._solve(instance)
        if net is None:
            raise NoExactFitError(f"no {self.n_units}-unit network fits the "
                                  f"{len(points)} training points exactly")
        self.network_ = net
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "network_")
        X = check_rational_array(X)
        check_n_features(self, X)
        return np.array([self.network_(row) for row in X], dtype=object)

    def score(self, X, y):
        """Fraction of samples predicted exactly (a Fraction in ``[0, 1]``)."""
        X, y = check_rational_X_y(X, y)
        pred = self.predict(X)
        hits = sum(1 for a, b in zip(pred, y) if a == b)
        return Fraction(hits, len(y))


class ConvexReluRegressor(_ExactFitBase):
    """Exact fit with ``n_units`` ReLUs whose output weights are all +1 (or all -1).

    Parameters
    ----------
    n_units : int
        Number of hidden ReLUs.
    concave : bool
        Fit ``-sum_j [w_j . x + b_j]_+`` instead.
    """

    def __init__(self, n_units=1, concave=False):
        self.n_units = n_units
        self.concave = concave

    def _solve(self, instance):
        self.search_log_ = SearchLog()
        if self.concave:
            return exact_fit_concave(instance, self.search_log_)
        return exact_fit_convex(instance, self.search_log_)


class BruteForceReluRegressor(_ExactFitBase):
    """Exact fit with ``n_units`` ReLUs, output weights in {-1, +1}, by enumeration."""

    def __init__(self, n_units=1, convex_only=False):
        self.n_units = n_units
        self.convex_only = convex_only

    def _solve(self, instance):
        return brute_force_fit_relu(instance, convex_only=self.convex_only)


class ThresholdRegressor(_ExactFitBase):
    """Exact fit with ``n_units`` linear threshold units, by enumeration."""

    activation = Activation.LT

    def __init__(self, n_units=1):
        self.n_units = n_units

    def _solve(self, instance):
        return brute_force_fit_lt(instance)
