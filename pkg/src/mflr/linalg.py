"""Dense-matrix validation and the two factorization-backed solvers.

Matrices are plain 2-D float64 ``numpy`` arrays; every public entry point
validates shape and finiteness once via :func:`as_matrix` so downstream code
can assume clean inputs.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DataError, NumericalError


def as_matrix(values, name="matrix"):
    """Coerce ``values`` to a 2-D float64 array, rejecting non-finite entries."""
    a = np.asarray(values, dtype=float)
    if a.ndim != 2:
        raise DataError(f"{name} must be 2-D, got {a.ndim}-D", code="bad-shape")
    if not np.all(np.isfinite(a)):
        raise DataError(f"{name} contains non-finite entries", code="non-finite")
    return a


def thin_svd(a):
    """Thin SVD ``A = U @ diag(s) @ V.T`` with ``r = min(m, n)`` columns.

    Returns ``(U, s, V)`` with non-increasing singular values and orthonormal
    columns in both factors. Rank-deficient inputs are fine; if the default
    divide-and-conquer driver fails to converge we retry with the slower but
    more robust gesvd driver before giving up.
    """
    a = as_matrix(a, "svd input")
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError:
        try:
            u, s, vt = scipy.linalg.svd(a, full_matrices=False, lapack_driver="gesvd")
        except Exception as exc:  # pragma: no cover - requires pathological input
            raise NumericalError(f"SVD failed to converge: {exc}") from exc
    return u, s, vt.T


def solve_least_squares(a, b):
    """Minimum-norm minimizer ``X`` of ``||A @ X - B||_F``.

    Singular values below ``max(n, p) * eps * s_1`` are treated as zero, so
    rank-deficient systems return the minimum-norm solution instead of
    failing.
    """
    a = as_matrix(a, "least-squares lhs")
    b = as_matrix(b, "least-squares rhs")
    if a.shape[0] != b.shape[0]:
        raise DataError(
            f"row mismatch in least squares: lhs has {a.shape[0]}, rhs has {b.shape[0]}",
            code="bad-shape",
        )
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise DataError("least-squares system must have at least one row and column", code="bad-shape")
    x, _, _, _ = np.linalg.lstsq(a, b, rcond=None)
    return x
