"""Polynomial feature maps and min-max input scaling.

The feature basis is the full total-degree monomial family (cross terms
included) in a fixed graded order, so feature indices are stable across fits
and serialization.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError


def monomial_exponents(input_dim, degree):
    """Exponent vectors of all monomials with total degree <= ``degree``.

    Ordering is graded: the constant term first, then degree 1, 2, ...;
    within a degree block exponents follow combinations-with-replacement
    order (x0^2, x0*x1, x1^2 for two inputs).
    """
    exponents = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(input_dim), total):
            e = [0] * input_dim
            for i in combo:
                e[i] += 1
            exponents.append(tuple(e))
    return exponents


@dataclass(frozen=True)
class FeatureMap:
    """Total-degree multivariate polynomial basis over ``input_dim`` inputs."""

    input_dim: int
    degree: int

    def __post_init__(self):
        if self.input_dim < 0:
            raise DataError("feature map input_dim must be non-negative", code="bad-config")
        if self.degree < 0:
            raise DataError("feature map degree must be non-negative", code="bad-config")

    @property
    def p(self):
        """Number of basis monomials, C(input_dim + degree, degree)."""
        return math.comb(self.input_dim + self.degree, self.degree)

    def exponents(self):
        return monomial_exponents(self.input_dim, self.degree)

    def evaluate(self, x):
        """Design matrix of shape (J, p) for inputs ``x`` of shape (input_dim, J)."""
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[0] != self.input_dim:
            raise DataError(
                f"inputs must have shape ({self.input_dim}, J), got {x.shape}",
                code="bad-shape",
            )
        cols = x.T
        out = np.empty((x.shape[1], self.p))
        for j, e in enumerate(self.exponents()):
            out[:, j] = np.prod(cols ** np.asarray(e, dtype=float), axis=1)
        return out


@dataclass(frozen=True)
class InputScaler:
    """Min-max map of inputs onto the unit cube, fitted on training bounds.

    Zero-range coordinates are pinned to 0 so feature evaluation stays
    finite; callers that need to exclude degenerate coordinates (distance
    computations) handle that themselves.
    """

    lower: np.ndarray
    upper: np.ndarray

    @classmethod
    def fit(cls, x):
        x = np.asarray(x, dtype=float)
        if x.ndim != 2:
            raise DataError("scaler inputs must be 2-D", code="bad-shape")
        return cls(lower=x.min(axis=1), upper=x.max(axis=1))

    @property
    def input_dim(self):
        return self.lower.shape[0]

    def transform(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[0] != self.input_dim:
            raise DataError(
                f"inputs must have shape ({self.input_dim}, J), got {x.shape}",
                code="bad-shape",
            )
        span = self.upper - self.lower
        safe = np.where(span > 0, span, 1.0)
        return (x - self.lower[:, None]) / safe[:, None]
