"""Exact (zero-error) training of two-layer ReLU and linear-threshold networks."""

from .convexfit import SearchLog, exact_fit_concave, exact_fit_convex
from .estimators import (BruteForceReluRegressor, ConvexReluRegressor, NoExactFitError,
                         ThresholdRegressor)
from .nets import (Activation, Instance, LabeledPoint, LossKind, LTNetwork, ReluNetwork, Unit,
                   eval_lt, eval_relu, is_exact_fit, levee_network, levee_value,
                   stripe_network, total_loss)
from .oracle import OracleGuardError, brute_force_fit_lt, brute_force_fit_relu

__version__ = "0.1.0"

__all__ = [
    "Activation", "BruteForceReluRegressor", "ConvexReluRegressor", "Instance",
    "LabeledPoint", "LossKind", "LTNetwork", "NoExactFitError", "OracleGuardError",
    "ReluNetwork", "SearchLog", "ThresholdRegressor", "Unit", "brute_force_fit_lt",
    "brute_force_fit_relu", "eval_lt", "eval_relu", "exact_fit_concave", "exact_fit_convex",
    "is_exact_fit", "levee_network", "levee_value", "stripe_network", "total_loss",
]
