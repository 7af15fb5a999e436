"""Jump-rate estimators built on the log empirical characteristic function.

The Fourier route inverts the phase-continuous log-ECF on the grid; the
histogram route evaluates the equivalent closed forms by the truncated
series logarithm of the empirical frequencies.  The two agree to grid
precision whenever the ECF loop has winding number zero; otherwise a
loop correction (shrinking or zero editing) is applied first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .ecf import (
    CoeffPoly,
    SHRINK_LADDER,
    continuous_log,
    default_grid_size,
    ecf_eval,
    edit_zeros,
    histogram,
    shrink,
    shrink_adaptive,
)
from .errors import (
    CorrectionFailureError,
    DegenerateProfileError,
    NoEmptyBinsError,
    SingularEcfError,
)
from .series import _log_coeffs
from .simulate import BinSeries
from .validation import as_float_array, check_positive_int, readonly

__all__ = [
    "EstimationOptions",
    "EstimatedProfile",
    "EstimateResult",
    "Reparameterization",
    "estimate_rates_fourier",
    "estimate_rates_histogram",
    "estimate_tails",
    "estimate_functional",
    "reparameterize",
]

_CORRECTIONS = ("none", "auto-shrink", "auto-edit")

#: Default zero-editing radius excess.
DEFAULT_EDIT_EPS = 0.075


@dataclass(frozen=True)
class EstimationOptions:
    """Tuning knobs of the Fourier estimation pipeline.

    nmax
        Number of rate orders to estimate.
    grid_size
        ECF grid size; None picks the smallest power of two >=
        max(256, 8 (K+1)) for histogram degree K.
    correction
        Strategy when the ECF loop has nonzero winding number: "none"
        fails, "auto-shrink" shrinks towards 1 (fixed ``delta`` or the
        adaptive ladder), "auto-edit" (default) moves the offending
        polynomial roots out of the unit disc.
    delta, eps
        Shrinking parameter and editing radius excess.
    """

    nmax: int = 12
    grid_size: int | None = None
    correction: str = "auto-edit"
    delta: float | None = None
    eps: float = DEFAULT_EDIT_EPS

    def __post_init__(self):
        check_positive_int(self.nmax, "nmax")
        if self.grid_size is not None:
            check_positive_int(self.grid_size, "grid_size", minimum=4)
        if self.correction not in _CORRECTIONS:
            raise ValueError(
                f"correction must be one of {_CORRECTIONS}, got {self.correction!r}"
            )
        if self.delta is not None and not (0.0 < self.delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.eps is not None and self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")


@dataclass(frozen=True)
class EstimatedProfile:
    """Estimated rates nu_hat_1..nu_hat_M; entries may be negative."""

    rates: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rates", readonly(as_float_array(self.rates, "rates")))

    @property
    def nmax(self) -> int:
        return self.rates.size


@dataclass(frozen=True)
class EstimateResult:
    """Rates, tail sums and bookkeeping from one estimation run.

    ``winding_before`` is None when the uncorrected loop passed through
    the origin, where the winding number is undefined.
    """

    rates: EstimatedProfile
    nu_plus_hat: float
    tails: np.ndarray
    winding_before: int | None
    correction: str
    correction_parameter: float | None
    h: float
    T: float
    grid_size: int
    poly: CoeffPoly


def _corrected_poly(bins: BinSeries, opts: EstimationOptions):
    """Histogram polynomial, corrected until its loop has winding zero."""
    poly = histogram(bins)
    if poly.coeffs[0] <= 0.0:
        raise NoEmptyBinsError(
            "no empty bins observed (p_0 = 0); log p_0 is undefined"
        )
    G = opts.grid_size or default_grid_size(poly.degree)
    try:
        log = continuous_log(ecf_eval(poly, G))
        winding_before = log.winding
    except SingularEcfError:
        # the loop hits the origin (e.g. even and odd counts exactly tie);
        # both corrections move it away, so treat as maximally wound
        if opts.correction == "none":
            raise
        log, winding_before = None, None
    correction, parameter = "none", None
    if log is None or log.winding != 0:
        if opts.correction == "none":
            raise CorrectionFailureError(
                f"ECF has winding number {log.winding} and corrections are disabled"
            )
        if opts.correction == "auto-shrink":
            if opts.delta is not None:
                poly, parameter = shrink(poly, opts.delta), opts.delta
            else:
                poly, parameter = shrink_adaptive(poly, SHRINK_LADDER)
            correction = "shrink"
        else:
            eps = DEFAULT_EDIT_EPS if opts.eps is None else opts.eps
            poly, parameter = edit_zeros(poly, eps), eps
            correction = "edit"
        log = continuous_log(ecf_eval(poly, G))
        if log.winding != 0:
            raise CorrectionFailureError(
                f"{correction} correction left winding number {log.winding}"
            )
    return poly, log, winding_before, correction, parameter


_GRID_CAP = 1 << 16


def _rates_from_log(log_values: np.ndarray, nmax: int, h: float) -> np.ndarray:
    coef = np.fft.fft(log_values)[1 : nmax + 1] / log_values.size
    return coef.real / h


def estimate_rates_fourier(
    bins: BinSeries, opts: EstimationOptions | None = None
) -> EstimateResult:
    """Rates nu_hat_n as inverse Fourier coefficients of the log-ECF.

    nu_hat_n = (2 pi h)^{-1} sum_j log gamma(theta_j) e^{-i n theta_j}
    (2 pi / G), while nu_hat_+ comes from the exact closed form
    -log(c_0)/h of the (corrected) coefficient vector.  Tail sums
    telescope: rho_hat_m = nu_hat_+ - sum_{n<m} nu_hat_n.

    With an automatic grid, G doubles until the rates stop moving; the
    aliasing error decays geometrically in G but its rate depends on how
    close the polynomial roots come to the unit circle.  An explicit
    ``grid_size`` is honoured as given.
    """
    opts = opts or EstimationOptions()
    poly, log, winding_before, correction, parameter = _corrected_poly(bins, opts)
    G = log.grid_size
    if opts.nmax >= G:
        raise ValueError(f"nmax={opts.nmax} requires a grid larger than {G}")
    rates = _rates_from_log(log.log_values, opts.nmax, bins.h)
    if opts.grid_size is None:
        while G < _GRID_CAP:
            log = continuous_log(ecf_eval(poly, 2 * G))
            G = log.grid_size
            refined = _rates_from_log(log.log_values, opts.nmax, bins.h)
            step = float(np.max(np.abs(refined - rates)))
            rates = refined
            if step <= 1e-11 * max(1.0, float(np.max(np.abs(rates)))):
                break
    nu_plus = -math.log(poly.coeffs[0]) / bins.h
    tails = nu_plus - np.concatenate(([0.0], np.cumsum(rates[:-1])))
    return EstimateResult(
        rates=EstimatedProfile(rates),
        nu_plus_hat=nu_plus,
        tails=tails,
        winding_before=winding_before,
        correction=correction,
        correction_parameter=parameter,
        h=bins.h,
        T=bins.T,
        grid_size=G,
        poly=poly,
    )


def estimate_rates_histogram(bins: BinSeries, nmax: int) -> EstimatedProfile:
    """Closed-form rates from the raw histogram: h nu_hat = log-series of p_hat."""
    nmax = check_positive_int(nmax, "nmax")
    poly = histogram(bins)
    if poly.coeffs[0] <= 0.0:
        raise NoEmptyBinsError(
            "no empty bins observed (p_0 = 0); log p_0 is undefined"
        )
    padded = np.zeros(nmax + 1)
    take = min(poly.coeffs.size, nmax + 1)
    padded[:take] = poly.coeffs[:take]
    return EstimatedProfile(_log_coeffs(padded)[1:] / bins.h)


def estimate_tails(
    bins: BinSeries,
    opts: EstimationOptions | None = None,
    method: str = "telescoping",
) -> np.ndarray:
    """Tail-sum estimates rho_hat_1..rho_hat_M.

    The default telescopes the Fourier rates, which sidesteps the
    removable integrand singularity at theta = 0 entirely.  The
    "quadrature" mode integrates log gamma(theta) e^{-im theta} /
    (1 - e^{-i theta}) on the grid with the theta = 0 node replaced by
    its analytic limit (the mean count of the working polynomial); it
    exists as a cross-check and agrees to grid precision.
    """
    if method == "telescoping":
        return estimate_rates_fourier(bins, opts).tails
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    opts = opts or EstimationOptions()
    poly, log, *_ = _corrected_poly(bins, opts)
    G = log.grid_size
    theta = 2.0 * np.pi * np.arange(G) / G
    mean_count = float(np.dot(np.arange(poly.coeffs.size), poly.coeffs))
    denom = 1.0 - np.exp(-1j * theta[1:])
    tails = np.empty(opts.nmax)
    for m in range(1, opts.nmax + 1):
        integrand = log.log_values[1:] * np.exp(-1j * m * theta[1:]) / denom
        tails[m - 1] = (integrand.sum().real + mean_count) / (G * bins.h)
    return tails


def estimate_functional(
    bins: BinSeries, c, opts: EstimationOptions | None = None
) -> float:
    """Linear functional sum_n c_n nu_hat_n of the Fourier rates."""
    weights = as_float_array(c, "c")
    if weights.size < 1:
        raise ValueError("functional weights must not be empty")
    opts = opts or EstimationOptions()
    if opts.nmax < weights.size:
        opts = replace(opts, nmax=weights.size)
    result = estimate_rates_fourier(bins, opts)
    return float(np.dot(weights, result.rates.rates[: weights.size]))


@dataclass(frozen=True)
class Reparameterization:
    """Normalized rates omega_n = nu_n/nu_+ and their square roots.

    The square-root entry is NaN wherever the rate estimate is
    negative (the transform is undefined there).
    """

    omega: np.ndarray
    omega_sqrt: np.ndarray


def reparameterize(est: EstimateResult) -> Reparameterization:
    """Normalized profiles from an estimation result; needs nu_hat_+ > 0."""
    if est.nu_plus_hat <= 0.0:
        raise DegenerateProfileError(
            f"nu_plus_hat={est.nu_plus_hat} is not positive"
        )
    omega = est.rates.rates / est.nu_plus_hat
    with np.errstate(invalid="ignore"):
        omega_sqrt = np.where(est.rates.rates >= 0.0, np.sqrt(np.abs(omega)), np.nan)
    return Reparameterization(omega=omega, omega_sqrt=omega_sqrt)
