"""Output-space dimensionality reduction: fit, truncate, project, reconstruct.

A :class:`ReducedBasis` holds the truncated left singular vectors of the
mean-centered training outputs together with the sample mean and the full
singular-value spectrum, which is what the energy-based truncation rule and
the reconstruction-error identities need.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .linalg import as_matrix, thin_svd


@dataclass(frozen=True)
class ReducedBasis:
    """Truncated orthonormal basis with training mean and SVD spectrum.

    ``basis`` has shape (m, k) with orthonormal columns; ``k = 0`` denotes a
    mean-only model (constant training data). ``singular_values`` keeps the
    full thin-SVD spectrum so discarded energy can be computed exactly.
    """

    basis: np.ndarray
    mean: np.ndarray
    singular_values: np.ndarray
    k: int
    energy_tolerance: float

    @property
    def output_dim(self):
        return self.basis.shape[0]

    def discarded_energy(self):
        """Sum of squared singular values beyond the retained dimension."""
        return float(np.sum(self.singular_values[self.k :] ** 2))


def fit_basis(outputs, epsilon):
    """Fit a mean-centered basis retaining cumulative energy above ``epsilon``.

    The retained dimension k is the smallest integer whose cumulative squared
    singular values strictly exceed ``epsilon`` times the total energy. Data
    whose spectrum is numerically zero (constant columns) yield k = 0 and an
    empty basis, which downstream code treats as a mean-only model.
    """
    y = as_matrix(outputs, "training outputs")
    m, n = y.shape
    if n < 1:
        raise DataError("training outputs need at least one sample", code="bad-shape")
    if not 0.0 < epsilon <= 1.0:
        raise DataError(f"energy tolerance must lie in (0, 1], got {epsilon}", code="bad-config")
    mean = y.mean(axis=1)
    u, s, _ = thin_svd(y - mean[:, None])
    scale = float(np.abs(y).max()) if y.size else 0.0
    if s.size == 0 or s[0] <= m * n * np.finfo(float).eps * scale:
        k = 0
    else:
        energy = np.cumsum(s**2)
        above = np.flatnonzero(energy > epsilon * energy[-1])
        k = int(above[0]) + 1 if above.size else int(s.size)
    return ReducedBasis(
        basis=u[:, :k].copy(),
        mean=mean,
        singular_values=s,
        k=k,
        energy_tolerance=float(epsilon),
    )


def project(basis: ReducedBasis, outputs):
    """Reduced states (k, J): project mean-centered ``outputs`` onto the basis."""
    y = as_matrix(outputs, "outputs")
    if y.shape[0] != basis.output_dim:
        raise DataError(
            f"outputs have {y.shape[0]} rows, basis expects {basis.output_dim}",
            code="bad-shape",
        )
    return basis.basis.T @ (y - basis.mean[:, None])


def reconstruct(basis: ReducedBasis, states):
    """Lift reduced states (k, J) back to the full output space (m, J)."""
    c = as_matrix(states, "reduced states")
    if c.shape[0] != basis.k:
        raise DataError(
            f"reduced states have {c.shape[0]} rows, basis retains k={basis.k}",
            code="bad-shape",
        )
    return basis.basis @ c + basis.mean[:, None]
