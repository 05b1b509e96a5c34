"""Ordinary and weighted least squares over polynomial features.

WLS is solved by scaling the design-matrix rows and targets by sqrt(w) and
handing the result to the SVD-backed least-squares solver; the explicit
normal-equations closed form exists only as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .features import FeatureMap
from .linalg import as_matrix, solve_least_squares


@dataclass(frozen=True)
class LinearModel:
    """Linear map from polynomial features to reduced states.

    ``coefficients`` has shape (p, k): one column per reduced dimension.
    """

    feature_map: FeatureMap
    coefficients: np.ndarray

    def __post_init__(self):
        if self.coefficients.ndim != 2 or self.coefficients.shape[0] != self.feature_map.p:
            raise DataError(
                f"coefficients must have {self.feature_map.p} rows, got shape "
                f"{self.coefficients.shape}",
                code="bad-shape",
            )

    @property
    def output_dim(self):
        return self.coefficients.shape[1]

    def predict(self, x):
        """Reduced-state predictions (k, J) at inputs ``x`` of shape (d, J)."""
        return (self.feature_map.evaluate(x) @ self.coefficients).T


def fit_ols(feature_map: FeatureMap, inputs, states):
    """OLS fit of reduced states (k, N) on features of inputs (d, N).

    Rank-deficient designs (N < p) return the minimum-norm coefficients.
    """
    x = as_matrix(inputs, "inputs")
    c = as_matrix(states, "states")
    if x.shape[1] != c.shape[1]:
        raise DataError(
            f"inputs have {x.shape[1]} samples but states have {c.shape[1]}",
            code="bad-shape",
        )
    beta = solve_least_squares(feature_map.evaluate(x), c.T)
    return LinearModel(feature_map=feature_map, coefficients=beta)


def fit_wls(feature_map: FeatureMap, inputs, states, weights):
    """WLS fit minimizing sum_i w_i ||phi(x_i)^T beta - c_i||^2.

    Weights must be finite and non-negative with at least one strictly
    positive entry; zero-weight samples are inert.
    """
    x = as_matrix(inputs, "inputs")
    c = as_matrix(states, "states")
    w = np.asarray(weights, dtype=float).ravel()
    if x.shape[1] != c.shape[1]:
        raise DataError(
            f"inputs have {x.shape[1]} samples but states have {c.shape[1]}",
            code="bad-shape",
        )
    if w.shape[0] != x.shape[1]:
        raise DataError(
            f"expected {x.shape[1]} weights, got {w.shape[0]}", code="bad-shape"
        )
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise DataError("weights must be finite and non-negative", code="bad-weights")
    if not np.any(w > 0):
        raise DataError("no effective training data: all weights are zero", code="bad-weights")
    root = np.sqrt(w)[:, None]
    beta = solve_least_squares(root * feature_map.evaluate(x), root * c.T)
    return LinearModel(feature_map=feature_map, coefficients=beta)
