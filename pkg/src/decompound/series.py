"""Truncated power-series algebra.

Univariate log/exp recursions on coefficient vectors, plus extraction of
bivariate Taylor coefficients of the covariance kernel generating
function.  Everything here is exact up to floating point: a truncated
series of order D carries all the information needed for coefficients up
to order D, so no discretisation error enters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .validation import as_float_array, readonly

__all__ = [
    "TruncSeries",
    "BivarSeries",
    "series_log",
    "series_exp",
    "bivar_exp",
    "bivar_taylor_J",
    "taylor_coefficient_table",
]


@dataclass(frozen=True)
class TruncSeries:
    """Coefficients c_0..c_D of a power series truncated at order D."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = as_float_array(self.coeffs, "coeffs")
        if arr.size < 1:
            raise ValueError("a truncated series needs at least the constant term")
        object.__setattr__(self, "coeffs", readonly(arr))

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self) -> int:
        return self.coeffs.size


@dataclass(frozen=True)
class BivarSeries:
    """Rectangular coefficient matrix c_ij of a bivariate truncated series."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=float)
        if arr.ndim != 2:
            raise ValueError(f"bivariate coefficients must be a matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("bivariate coefficients must be finite")
        object.__setattr__(self, "coeffs", readonly(arr))

    @property
    def orders(self) -> tuple[int, int]:
        return self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1


def _log_coeffs(p: np.ndarray) -> np.ndarray:
    """Coefficients of log(p) for a coefficient vector with p[0] > 0.

    b_0 = log p_0 and, for n >= 1,
    b_n = p_n/p_0 - (1/(n p_0)) * sum_{k=1}^{n-1} k b_k p_{n-k}.
    """
    if p[0] <= 0:
        raise ValueError(f"leading coefficient must be positive, got {p[0]}")
    b = np.empty_like(p)
    b[0] = math.log(p[0])
    for n in range(1, p.size):
        acc = 0.0
        if n > 1:
            k = np.arange(1, n)
            acc = float(np.dot(k * b[1:n], p[n - 1:0:-1]))
        b[n] = p[n] / p[0] - acc / (n * p[0])
    return b


def _exp_coeffs(a: np.ndarray) -> np.ndarray:
    """Coefficients of exp(a): p_0 = e^{a_0}, p_n = (1/n) sum_{k=1}^n k a_k p_{n-k}."""
    p = np.empty_like(a)
    p[0] = math.exp(a[0])
    for n in range(1, a.size):
        k = np.arange(1, n + 1)
        p[n] = float(np.dot(k * a[1:n + 1], p[n - 1::-1])) / n
    return p


def series_log(p: TruncSeries) -> TruncSeries:
    """Logarithm of a truncated series; requires a positive constant term."""
    return TruncSeries(_log_coeffs(np.array(p.coeffs)))


def series_exp(a: TruncSeries) -> TruncSeries:
    """Exponential of a truncated series."""
    return TruncSeries(_exp_coeffs(np.array(a.coeffs)))


def _bivar_exp_coeffs(a: np.ndarray) -> np.ndarray:
    """Exponential of a bivariate truncated series.

    Runs the univariate exp recursion along the first variable with
    coefficients that are themselves truncated series in the second
    variable; products become truncated convolutions, so the cost is
    O(D1^2 * D2^2).
    """
    d1, d2 = a.shape
    out = np.empty_like(a)
    out[0] = _exp_coeffs(a[0])
    for n in range(1, d1):
        row = np.zeros(d2)
        for k in range(1, n + 1):
            row += k * np.convolve(a[k], out[n - k])[:d2]
        out[n] = row / n
    return out


def bivar_exp(a: BivarSeries) -> BivarSeries:
    """Exponential of a bivariate truncated series."""
    return BivarSeries(_bivar_exp_coeffs(np.array(a.coeffs)))


def _kernel_exponent(rates: np.ndarray, h: float, n1: int, n2: int) -> np.ndarray:
    """Coefficient matrix of h * sum_n nu_n (z1^n - 1)(z2^n - 1), truncated at (n1, n2)."""
    e = np.zeros((n1 + 1, n2 + 1))
    e[0, 0] = h * rates.sum()
    for n in range(1, rates.size + 1):
        nu = rates[n - 1]
        if nu == 0.0:
            continue
        if n <= n1:
            e[n, 0] -= h * nu
        if n <= n2:
            e[0, n] -= h * nu
        if n <= n1 and n <= n2:
            e[n, n] += h * nu
    return e


def taylor_coefficient_table(rates, h: float, n1: int, n2: int, a1: int, a2: int) -> np.ndarray:
    """All Taylor coefficients J(i, j, a1, a2) for i <= n1, j <= n2.

    The generating function is (exp[h sum_n nu_n (z1^n-1)(z2^n-1)] - 1)
    divided by h and, per unit flag a_j, by (z_j - 1).  Since the
    numerator vanishes on z_j = 1, dividing by (z_j - 1) is exact
    bottom-up power-series division: 1/(z-1) = -sum_k z^k, i.e. a signed
    cumulative sum of the coefficients.  Coefficient (i, j) therefore
    depends on numerator coefficients up to (i, j) only.
    """
    rates = np.asarray(getattr(rates, "rates", rates), dtype=float)
    if n1 < 0 or n2 < 0:
        raise ValueError("orders must be nonnegative")
    if a1 not in (0, 1) or a2 not in (0, 1):
        raise ValueError("axis flags must be 0 or 1")
    f = _bivar_exp_coeffs(_kernel_exponent(rates, h, n1, n2))
    f[0, 0] -= 1.0
    if a1:
        f = -np.cumsum(f, axis=0)
    if a2:
        f = -np.cumsum(f, axis=1)
    return f / h


def bivar_taylor_J(rates, h: float, n1: int, n2: int, a1: int, a2: int) -> float:
    """Single Taylor coefficient J(n1, n2, a1, a2) of the covariance kernel.

    *rates* may be a profile object exposing ``.rates`` or a plain
    nonnegative array nu_1..nu_K.
    """
    return float(taylor_coefficient_table(rates, h, n1, n2, a1, a2)[n1, n2])
