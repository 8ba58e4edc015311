"""Input checks shared by the estimator and the command line."""
from __future__ import annotations

import numpy as np

from .algebra import check_dim
from .exceptions import DimensionMismatchError, StateError
from .wigner import DensityMatrix

__all__ = ["check_dim", "check_density_batch", "check_wigner_batch"]


def check_density_batch(X, dim: int | None = None) -> np.ndarray:
    """Coerce ``X`` to a validated stack of density matrices, shape ``(n, N, N)``.

    A single ``(N, N)`` matrix is promoted to a batch of one.  Every member
    must be Hermitian, unit-trace and positive semidefinite.
    """
    X = np.asarray(X, dtype=complex)
    if X.ndim == 2:
        X = X[None]
    if X.ndim != 3 or X.shape[1] != X.shape[2]:
        raise DimensionMismatchError(f"expected (n, N, N) density matrices, got shape {X.shape}")
    if dim is not None and X.shape[1] != dim:
        raise DimensionMismatchError(f"expected N={dim}, got N={X.shape[1]}")
    for i, rho in enumerate(X):
        try:
            DensityMatrix(rho)
        except StateError as exc:
            raise StateError(f"sample {i}: {exc}") from exc
    return X


def check_wigner_batch(W, dim: int) -> np.ndarray:
    """Coerce flattened Wigner grids to shape ``(n, 2N, 2N)``."""
    W = np.asarray(W, dtype=float)
    side = 2 * dim
    if W.ndim == 1:
        W = W[None]
    if W.ndim == 2 and W.shape[1] == side * side:
        return W.reshape(-1, side, side)
    if W.ndim == 3 and W.shape[1:] == (side, side):
        return W
    raise DimensionMismatchError(f"expected Wigner grids of {side}x{side} values, got shape {W.shape}")
