"""Input validation helpers shared by solvers, estimators and I/O."""

import numpy as np

from .errors import DimensionMismatch, NonFinite


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite(f"{name} contains non-finite entries")
    return a


def as_vector(x, length: int | None = None, name: str = "vector") -> np.ndarray:
    x = np.asarray(x, dtype=np.float64).ravel()
    if length is not None and x.shape[0] != length:
        raise DimensionMismatch(f"{name} has length {x.shape[0]}, expected {length}")
    if not np.all(np.isfinite(x)):
        raise NonFinite(f"{name} contains non-finite entries")
    return x


def check_unit_columns(a: np.ndarray, tol: float = 1e-8, name: str = "matrix") -> None:
    norms = np.linalg.norm(a, axis=0)
    bad = np.flatnonzero(np.abs(norms - 1.0) > tol)
    if bad.size:
        raise ValueError(
            f"{name} column {bad[0]} has norm {norms[bad[0]]:.6g}; columns must have "
            "unit l2 norm (use normalize_columns to prepare a raw matrix)"
        )


def check_state_finite(v: np.ndarray, t: int | float) -> None:
    if not np.all(np.isfinite(v)):
        raise NonFinite(f"solver state became non-finite at t={t}")
