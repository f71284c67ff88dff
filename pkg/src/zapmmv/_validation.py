import numpy as np

from .exceptions import DimensionError, NonFiniteError


def check_matrix(x, name="matrix"):
    """Return ``x`` as a finite 2-D float64 array.

    1-D input is treated as a single column, mirroring how a single
    measurement vector is an ``M x 1`` matrix.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionError(f"{name} must be non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains NaN or infinite entries")
    return arr


def check_system(a, y):
    """Validate a sensing matrix and measurement matrix pair."""
    a = check_matrix(a, "A")
    y = check_matrix(y, "Y")
    if a.shape[0] != y.shape[0]:
        raise DimensionError(
            f"A has shape {a.shape} but Y has shape {y.shape}; row counts must agree"
        )
    return a, y
