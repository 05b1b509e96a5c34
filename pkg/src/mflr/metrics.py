"""Normalized L2 accuracy and percentile aggregation over repetitions.

The percentile convention is linear interpolation between closest ranks
(numpy's default), the same one the proximity threshold uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .linalg import as_matrix


@dataclass(frozen=True)
class AccuracyReport:
    """Accuracy statistics for one method at one training-set size."""

    per_repetition: tuple
    median: float
    p25: float
    p75: float
    n_hf: int
    n_lf: int
    equivalent_cost: float


def normalized_l2_accuracy(y_true, y_pred):
    """1 minus the mean per-column relative L2 error.

    Perfect predictions score 1; an all-zero prediction scores 0. Columns of
    ``y_true`` must have positive norm.
    """
    yt = as_matrix(y_true, "true outputs")
    yp = as_matrix(y_pred, "predicted outputs")
    if yt.shape != yp.shape:
        raise DataError(
            f"shape mismatch: true {yt.shape} vs predicted {yp.shape}", code="bad-shape"
        )
    norms = np.linalg.norm(yt, axis=0)
    if np.any(norms == 0.0):
        raise DataError("zero-norm true output column", code="zero-norm")
    relative = np.linalg.norm(yt - yp, axis=0) / norms
    return float(1.0 - relative.mean())


def aggregate(accuracies, n_hf, n_lf, cost_ratio):
    """Percentile summary of per-repetition accuracies with equivalent cost.

    ``equivalent_cost`` counts the LF samples in HF units via ``cost_ratio``.
    """
    values = [float(a) for a in accuracies]
    if not values:
        raise DataError("no repetitions to aggregate", code="empty")
    if any(v > 1.0 + 1e-12 for v in values):
        raise DataError("accuracy above 1 is impossible for this metric", code="bad-value")
    p25, median, p75 = np.percentile(values, [25.0, 50.0, 75.0])
    return AccuracyReport(
        per_repetition=tuple(values),
        median=float(median),
        p25=float(p25),
        p75=float(p75),
        n_hf=int(n_hf),
        n_lf=int(n_lf),
        equivalent_cost=float(n_hf + n_lf * cost_ratio),
    )
