"""Asymptotic covariance of the rate and tail-sum estimators.

T times the asymptotic covariances are Taylor coefficients of the noise
kernel generating function, extracted exactly by truncated series
algebra (the primary path).  A 2-D Fourier quadrature of the defining
double integral is kept as an independent oracle; the two must agree to
grid precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EstimationError
from .series import bivar_taylor_J, taylor_coefficient_table
from .validation import as_rate_array, check_bin_width, check_positive_int, readonly

__all__ = [
    "KernelSpec",
    "CovMatrix",
    "kernel_gamma",
    "cov_rates",
    "cov_tails",
    "cov_cross",
    "cov_quadrature_oracle",
    "plug_in_spec",
]


@dataclass(frozen=True)
class KernelSpec:
    """Nonnegative rates (true or positive-part plug-in) plus bin width."""

    rates: np.ndarray
    h: float

    def __post_init__(self):
        object.__setattr__(self, "rates", readonly(as_rate_array(self.rates)))
        object.__setattr__(self, "h", check_bin_width(self.h))

    @property
    def K(self) -> int:
        """Truncation order (length of the rate vector)."""
        return self.rates.size

    @classmethod
    def from_profile(cls, profile, h: float) -> "KernelSpec":
        return cls(np.asarray(profile.rates, dtype=float), h)


def plug_in_spec(est, h: float, K: int) -> KernelSpec:
    """Kernel spec from estimated rates: positive parts, truncated at K."""
    K = check_positive_int(K, "K")
    rates = np.asarray(getattr(est, "rates", est), dtype=float)
    out = np.zeros(K)
    take = min(K, rates.size)
    out[:take] = np.maximum(rates[:take], 0.0)
    return KernelSpec(out, h)


@dataclass(frozen=True)
class CovMatrix:
    """T-scaled covariance block; divide ``entries`` by ``scale_T`` to use."""

    entries: np.ndarray
    scale_T: float
    kind: str

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"covariance entries must be square, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("covariance entries must be finite")
        if np.max(np.abs(arr - arr.T), initial=0.0) > 1e-10 * max(
            1.0, np.max(np.abs(arr), initial=0.0)
        ):
            raise ValueError("covariance entries must be symmetric")
        if arr.size and np.min(np.diag(arr)) < -1e-10:
            raise ValueError("covariance diagonal must be nonnegative")
        if self.kind not in ("rates", "tails", "cross"):
            raise ValueError(f"unknown covariance kind {self.kind!r}")
        object.__setattr__(self, "entries", readonly(arr))

    @property
    def per_time(self) -> np.ndarray:
        """Actual covariance of the estimates: entries / T."""
        return self.entries / self.scale_T


def kernel_gamma(spec: KernelSpec, theta1, theta2):
    """Noise kernel h^{-1}(exp[h sum_n nu_n (e^{i n t1}-1)(e^{i n t2}-1)] - 1).

    Vanishes identically on the coordinate axes.  Broadcasts over array
    arguments.
    """
    t1 = np.asarray(theta1, dtype=float)[..., None]
    t2 = np.asarray(theta2, dtype=float)[..., None]
    n = np.arange(1, spec.K + 1)
    s = np.sum(
        spec.rates * (np.exp(1j * t1 * n) - 1.0) * (np.exp(1j * t2 * n) - 1.0),
        axis=-1,
    )
    out = (np.exp(spec.h * s) - 1.0) / spec.h
    if np.isscalar(theta1) and np.isscalar(theta2):
        return complex(out)
    return out


def _symmetrized(table: np.ndarray) -> np.ndarray:
    return 0.5 * (table + table.T)


def cov_rates(spec: KernelSpec, T: float, nmax: int) -> CovMatrix:
    """T-scaled covariance matrix Omega of the rate estimates, orders 1..nmax."""
    nmax = check_positive_int(nmax, "nmax")
    table = taylor_coefficient_table(spec.rates, spec.h, nmax, nmax, 0, 0)
    return CovMatrix(_symmetrized(table[1:, 1:]), float(T), "rates")


def cov_tails(spec: KernelSpec, T: float, mmax: int) -> CovMatrix:
    """T-scaled covariance matrix Sigma of the tail-sum estimates, orders 1..mmax."""
    mmax = check_positive_int(mmax, "mmax")
    table = taylor_coefficient_table(spec.rates, spec.h, mmax - 1, mmax - 1, 1, 1)
    return CovMatrix(_symmetrized(table), float(T), "tails")


def cov_cross(spec: KernelSpec, T: float, m: int, n: int) -> float:
    """T-scaled cross-covariance of tail estimate rho_hat_m and rate nu_hat_n."""
    m = check_positive_int(m, "m")
    n = check_positive_int(n, "n")
    return bivar_taylor_J(spec.rates, spec.h, m - 1, n, 1, 0)


def _quadrature_J(
    spec: KernelSpec, n1: int, n2: int, a1: int, a2: int, G: int
) -> complex:
    theta = 2.0 * np.pi * np.arange(G) / G
    n = np.arange(1, spec.K + 1)
    A = np.exp(1j * np.outer(n, theta)) - 1.0  # K x G
    S = A.T @ (spec.rates[:, None] * A)  # G x G
    S *= spec.h
    np.exp(S, out=S)
    S -= 1.0
    S /= spec.h
    M = S
    d = np.exp(1j * theta) - 1.0
    vlim = (spec.rates * n) @ A  # limit of Gamma/(e^{i t}-1) on an axis
    if a1:
        M[1:, :] /= d[1:, None]
        M[0, :] = vlim
    if a2:
        M[:, 1:] /= d[None, 1:]
        col = vlim.astype(complex)
        if a1:
            col = col.copy()
            col[1:] /= d[1:]
            col[0] = float(np.dot(spec.rates, n * n))
        M[:, 0] = col
    e1 = np.exp(-2j * np.pi * n1 * np.arange(G) / G)
    e2 = np.exp(-2j * np.pi * n2 * np.arange(G) / G)
    return (e1 @ M @ e2) / G**2


def cov_quadrature_oracle(
    spec: KernelSpec,
    n1: int,
    n2: int,
    a1: int,
    a2: int,
    tol: float = 1e-8,
    start_grid: int = 128,
    max_grid: int = 2048,
) -> float:
    """J(n1, n2, a1, a2) by 2-D Fourier quadrature with grid refinement.

    Axis nodes with a unit flag use the analytic limit of the integrand
    (the kernel vanishes linearly on the axes).  The grid doubles until
    the value moves by less than *tol*; failure to settle raises.
    """
    if a1 not in (0, 1) or a2 not in (0, 1):
        raise ValueError("axis flags must be 0 or 1")
    if n1 < 0 or n2 < 0:
        raise ValueError("orders must be nonnegative")
    previous = None
    G = start_grid
    while G <= max_grid:
        value = _quadrature_J(spec, n1, n2, a1, a2, G)
        if previous is not None and abs(value - previous) < tol * max(1.0, abs(previous)):
            if abs(value.imag) > 1e-10 * max(1.0, abs(value)):
                raise EstimationError(
                    f"quadrature imaginary residue {value.imag:.3e} too large"
                )
            return float(value.real)
        previous = value
        G *= 2
    raise EstimationError(
        f"quadrature did not converge below {tol} within grid size {max_grid}"
    )
