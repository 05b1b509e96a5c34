"""Sample weights for the augmented training set.

High-fidelity samples always carry weight 1. Synthetic samples get either a
fixed weight ``w_syn`` or a proximity weight: ``w_syn`` when a synthetic
point is far enough from every HF point, 0 when its nearest-HF distance
falls below the ``tau_percentile``-th percentile of those distances
(a Heaviside cut).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DataError
from .linalg import as_matrix

FIXED = "fixed"
PROXIMITY = "proximity"
SIGMOID = "sigmoid"  # reserved: smooth distance transform, not implemented


@dataclass(frozen=True)
class WeightScheme:
    """How synthetic samples are down-weighted relative to HF samples."""

    kind: str = PROXIMITY
    w_syn: float = 0.1
    tau_percentile: float = 10.0

    def __post_init__(self):
        if self.kind == SIGMOID:
            raise DataError("sigmoid weighting is reserved but not implemented", code="unimplemented")
        if self.kind not in (FIXED, PROXIMITY):
            raise DataError(f"unknown weighting kind {self.kind!r}", code="bad-config")
        if not 0.0 < self.w_syn < 1.0:
            raise DataError(
                f"w_syn must lie strictly inside (0, 1), got {self.w_syn}",
                code="bad-config",
            )
        if not 0.0 <= self.tau_percentile <= 100.0:
            raise DataError(
                f"tau_percentile must lie in [0, 100], got {self.tau_percentile}",
                code="bad-config",
            )

    def with_w_syn(self, w_syn):
        return replace(self, w_syn=float(w_syn))


@dataclass(frozen=True)
class WeightVector:
    """Diagonal WLS weights: HF entries first (all 1), synthetic entries after.

    ``dropped_axes`` records input coordinates excluded from the proximity
    distance because their pooled training range was zero.
    """

    values: np.ndarray
    n_hf: int
    dropped_axes: tuple = ()

    @property
    def hf(self):
        return self.values[: self.n_hf]

    @property
    def synthetic(self):
        return self.values[self.n_hf :]


def nearest_hf_distances(x_hf, x_syn):
    """Min Euclidean distance from each synthetic point to the HF set.

    Distances are computed in min-max-normalized coordinates, with bounds
    taken from the pooled inputs so heterogeneous units do not dominate.
    Returns ``(rho, dropped_axes)``; zero-range coordinates are dropped from
    the distance and reported.
    """
    x_hf = as_matrix(x_hf, "HF inputs")
    x_syn = as_matrix(x_syn, "synthetic inputs")
    if x_hf.shape[0] != x_syn.shape[0]:
        raise DataError("HF and synthetic inputs disagree on dimension", code="bad-shape")
    pooled = np.hstack([x_hf, x_syn])
    lo = pooled.min(axis=1)
    span = pooled.max(axis=1) - lo
    keep = span > 0
    dropped = tuple(int(i) for i in np.flatnonzero(~keep))
    if not keep.any():
        return np.zeros(x_syn.shape[1]), dropped
    a = (x_hf[keep] - lo[keep, None]) / span[keep, None]
    b = (x_syn[keep] - lo[keep, None]) / span[keep, None]
    d2 = np.sum((b[:, :, None] - a[:, None, :]) ** 2, axis=0)
    return np.sqrt(d2.min(axis=1)), dropped


def build_weights(scheme: WeightScheme, x_hf, x_syn):
    """Assemble the weight vector for ``[HF samples, synthetic samples]``."""
    x_hf = as_matrix(x_hf, "HF inputs")
    x_syn = as_matrix(x_syn, "synthetic inputs")
    if x_hf.shape[0] != x_syn.shape[0]:
        raise DataError("HF and synthetic inputs disagree on dimension", code="bad-shape")
    n_hf, n_syn = x_hf.shape[1], x_syn.shape[1]
    if n_hf < 1 or n_syn < 1:
        raise DataError("need at least one HF and one synthetic sample", code="bad-shape")
    values = np.ones(n_hf + n_syn)
    dropped = ()
    if scheme.kind == FIXED:
        values[n_hf:] = scheme.w_syn
    else:
        rho, dropped = nearest_hf_distances(x_hf, x_syn)
        tau = np.percentile(rho, scheme.tau_percentile)
        values[n_hf:] = np.where(rho >= tau, scheme.w_syn, 0.0)
    return WeightVector(values=values, n_hf=n_hf, dropped_axes=dropped)
