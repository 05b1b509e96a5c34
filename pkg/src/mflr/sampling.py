"""Latin hypercube sampling and stratified subsampling of point pools."""

from __future__ import annotations

import numpy as np

from .errors import DataError
from .linalg import as_matrix


def lhs_sample(bounds, n, seed):
    """One Latin hypercube draw of ``n`` points, shape (d, n).

    Each coordinate places exactly one point uniformly inside each of ``n``
    equal-width bins, with bin order permuted independently per coordinate.
    ``bounds`` is a (d, 2) array of [lower, upper] rows.
    """
    b = np.asarray(bounds, dtype=float)
    if b.ndim != 2 or b.shape[1] != 2:
        raise DataError(f"bounds must have shape (d, 2), got {b.shape}", code="bad-shape")
    if n < 1:
        raise DataError("sample count must be positive", code="bad-config")
    lo, hi = b[:, 0], b[:, 1]
    if np.any(~np.isfinite(b)) or np.any(hi <= lo):
        raise DataError("degenerate sampling bounds", code="bad-bounds")
    rng = np.random.default_rng(seed)
    d = b.shape[0]
    unit = np.empty((d, n))
    for j in range(d):
        strata = rng.permutation(n)
        unit[j] = (strata + rng.random(n)) / n
    return lo[:, None] + (hi - lo)[:, None] * unit


def subsample_conditioned(pool, n, seed):
    """Greedy stratified subsample: ``n`` indices maximizing bin coverage.

    For each coordinate the pool range splits into ``n`` equal-width bins;
    each step picks the point covering the most still-empty (coordinate, bin)
    pairs, breaking ties with the seeded generator. Returns sorted distinct
    indices into the pool columns.
    """
    x = as_matrix(pool, "pool")
    d, n_pool = x.shape
    if n < 1:
        raise DataError("subsample size must be positive", code="bad-config")
    if n > n_pool:
        raise DataError(f"cannot draw {n} points from a pool of {n_pool}", code="bad-config")
    rng = np.random.default_rng(seed)
    lo = x.min(axis=1)
    span = x.max(axis=1) - lo
    safe = np.where(span > 0, span, 1.0)
    bins = np.minimum((n * (x - lo[:, None]) / safe[:, None]).astype(int), n - 1)
    covered = np.zeros((d, n), dtype=bool)
    rows = np.arange(d)
    available = np.ones(n_pool, dtype=bool)
    chosen = []
    for _ in range(n):
        gains = np.where(available, (~covered[rows[:, None], bins]).sum(axis=0), -1)
        best = np.flatnonzero(gains == gains.max())
        pick = int(best[rng.integers(best.size)]) if best.size > 1 else int(best[0])
        chosen.append(pick)
        available[pick] = False
        covered[rows, bins[:, pick]] = True
    return np.array(sorted(chosen), dtype=int)
