"""Input validation helpers.

Shared by the domain types, the scikit-learn style estimator facade and
the CLI.  All helpers either return a normalised value or raise
:class:`ValueError` with the offending argument named.
"""

from __future__ import annotations

import numpy as np


def as_float_array(values, name: str) -> np.ndarray:
    """Coerce *values* to a finite 1-D float array."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must contain only finite values")
    return arr


def as_rate_array(values, name: str = "rates") -> np.ndarray:
    """Coerce *values* to a finite 1-D array of nonnegative rates."""
    arr = as_float_array(values, name)
    if arr.size and arr.min() < 0:
        raise ValueError(f"{name} must be nonnegative")
    return arr


def check_counts(X, name: str = "counts") -> np.ndarray:
    """Coerce *X* to a 1-D array of nonnegative integer bin counts.

    Accepts any sequence of integers as well as a single-column 2-D
    array (the layout scikit-learn pipelines hand around).
    """
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-D sequence or a single-column array")
    if arr.size < 1:
        raise ValueError(f"{name} must contain at least one bin")
    as_float = np.asarray(arr, dtype=float)
    if not np.all(np.isfinite(as_float)):
        raise ValueError(f"{name} must contain only finite values")
    as_int = np.asarray(np.rint(as_float), dtype=np.int64)
    if np.any(np.abs(as_float - as_int) > 0):
        raise ValueError(f"{name} must be integers")
    if as_int.min() < 0:
        raise ValueError(f"{name} must be nonnegative")
    return as_int


def check_bin_width(h) -> float:
    h = float(h)
    if not np.isfinite(h) or h <= 0:
        raise ValueError(f"bin width h must be a positive number, got {h}")
    return h


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    iv = int(value)
    if iv != value or iv < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value}")
    return iv


def check_open_unit_interval(value, name: str) -> float:
    fv = float(value)
    if not (0.0 < fv < 1.0):
        raise ValueError(f"{name} must lie strictly between 0 and 1, got {value}")
    return fv


def check_positive(value, name: str) -> float:
    fv = float(value)
    if not np.isfinite(fv) or fv <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return fv


def readonly(arr: np.ndarray) -> np.ndarray:
    """Return *arr* with its write flag cleared (shared, not copied)."""
    arr.setflags(write=False)
    return arr
