"""Input checks for the estimator API.

scikit-learn's ``check_array`` casts to float, which would destroy the
exactness these estimators promise, so the checks here convert to
:class:`fractions.Fraction` instead.
"""

from __future__ import annotations

import numpy as np

from .ratlp import as_fraction


def check_rational_array(X, ensure_2d: bool = True) -> np.ndarray:
    """Object array of Fractions with shape ``(n_samples, n_features)``.

    Accepts ints, Fractions, ``"p/q"`` strings and floats (converted
    exactly).  NaN and infinities are rejected.
    """
    arr = np.asarray(X, dtype=object)
    if ensure_2d and arr.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("empty input")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        try:
            out[idx] = as_fraction(v)
        except (ValueError, OverflowError) as e:
            raise ValueError(f"entry {idx} = {v!r} is not a finite rational") from e
    return out


def check_rational_X_y(X, y):
    X = check_rational_array(X)
    y = check_rational_array(np.asarray(y, dtype=object).reshape(-1), ensure_2d=False)
    if len(y) != X.shape[0]:
        raise ValueError(f"X has {X.shape[0]} samples but y has {len(y)}")
    return X, y


def check_n_features(estimator, X):
    if X.shape[1] != estimator.n_features_in_:
        raise ValueError(f"X has {X.shape[1]} features, but {type(estimator).__name__} "
                         f"was fitted with {estimator.n_features_in_}")
