"""Compound Poisson model objects.

A rate profile nu_1..nu_K assigns an event rate to each integer jump
size; the binned increments of the resulting counting process have the
characteristic function exp[h sum_n nu_n (e^{i n theta} - 1)].  This
module provides the theoretical characteristic function and bin-count
distribution, tail sums, and a report of the quantities that govern how
trustworthy the large-sample approximations are for given (nu_+, h, T).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .series import TruncSeries, _exp_coeffs
from .validation import as_rate_array, check_bin_width, readonly

__all__ = [
    "RateProfile",
    "DiagnosticsReport",
    "cf_theoretical",
    "pmf_theoretical",
    "tail_sum",
    "asymptotics_report",
]


@dataclass(frozen=True)
class RateProfile:
    """True jump rates nu_1..nu_K (events/second), index n-1 holds nu_n."""

    rates: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rates", readonly(as_rate_array(self.rates)))

    @property
    def max_jump(self) -> int:
        """Largest jump size carried (the length K of the rate vector)."""
        return self.rates.size

    @property
    def nu_plus(self) -> float:
        """Total jump rate of the carrier process."""
        return float(self.rates.sum())

    def tail_sum(self, m: int) -> float:
        return tail_sum(self, m)


def cf_theoretical(profile: RateProfile, h: float, theta) -> complex | np.ndarray:
    """Characteristic function of a bin count at angle(s) *theta*.

    Returns exp[h sum_n nu_n (e^{i n theta} - 1)]; the value at theta=0
    is exactly 1 and the modulus never exceeds 1.
    """
    h = check_bin_width(h)
    theta_arr = np.asarray(theta, dtype=float)
    n = np.arange(1, profile.max_jump + 1)
    expo = h * np.sum(
        profile.rates * (np.exp(1j * np.multiply.outer(theta_arr, n)) - 1.0), axis=-1
    )
    out = np.exp(expo)
    return complex(out) if np.isscalar(theta) or theta_arr.ndim == 0 else out


def _pmf_cap(profile: RateProfile, h: float) -> int:
    return int(math.ceil(10.0 * (1.0 + h * profile.nu_plus * max(profile.max_jump, 1))))


def pmf_theoretical(profile: RateProfile, h: float, kmax: int | None = None) -> TruncSeries:
    """Bin-count probabilities p_0..p_kmax.

    Computed as the series exponential of (-h nu_+, h nu_1, ..., h nu_K),
    which is exact for every order.  When *kmax* is omitted, the series
    is cut at the first k whose cumulative mass exceeds 1 - 1e-12,
    capped at 10 * (1 + h nu_+ K).
    """
    h = check_bin_width(h)
    if kmax is not None and kmax < 0:
        raise ValueError(f"kmax must be >= 0, got {kmax}")
    upto = _pmf_cap(profile, h) if kmax is None else int(kmax)
    a = np.zeros(upto + 1)
    a[0] = -h * profile.nu_plus
    upper = min(profile.max_jump, upto)
    a[1:upper + 1] = h * profile.rates[:upper]
    p = _exp_coeffs(a)
    if kmax is None:
        covered = np.nonzero(np.cumsum(p) > 1.0 - 1e-12)[0]
        if covered.size:
            p = p[:covered[0] + 1]
    return TruncSeries(p)


def tail_sum(profile: RateProfile, m: int) -> float:
    """Total rate rho_m of jumps of size at least m."""
    if m < 1:
        raise ValueError(f"tail order m must be >= 1, got {m}")
    return float(profile.rates[m - 1:].sum())


@dataclass(frozen=True)
class DiagnosticsReport:
    """Raw quantities governing the validity of the normal approximations.

    The xi1 bounds bracket the mean-square first-order fluctuation of
    the log empirical characteristic function, eps2_bound caps the
    quadratic remainder and xi2_lower bounds it from below.  The flags
    apply advisory thresholds only; nothing in the estimation pipeline
    enforces them.
    """

    h_nu_plus: float
    nu_plus_over_T: float
    xi1_lower: float
    xi1_upper: float
    eps2_bound: float
    xi2_lower: float
    c0_ok: bool
    c1_ok: bool
    thresholds: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "h_nu_plus": self.h_nu_plus,
            "nu_plus_over_T": self.nu_plus_over_T,
            "xi1_lower": self.xi1_lower,
            "xi1_upper": self.xi1_upper,
            "eps2_bound": self.eps2_bound,
            "xi2_lower": self.xi2_lower,
            "c0_ok": self.c0_ok,
            "c1_ok": self.c1_ok,
            "thresholds": dict(self.thresholds),
        }


def asymptotics_report(
    nu_plus: float,
    h: float,
    T: float,
    *,
    c0_ratio_max: float = 0.1,
    c1_h_nu_max: float = 3.0,
    c1_consistency_max: float = 0.1,
    c1_h2t_max: float = 10.0,
) -> DiagnosticsReport:
    """Validity diagnostics for an observation window of length T.

    All bounds are exact arithmetic in (nu_+, h, T):

    - xi1 in [(e^{2 h nu_+}-1)/(Th), (e^{4 h nu_+}-1)/(Th)]
    - eps2 = 3((e^{4 h nu_+}-1)/T)^2 + 3 (h/T^3)(e^{8 h nu_+}-1)
    - xi2 >= 2 (1 - h/T)((e^{2 h nu_+}-1)/T)^2

    The advisory flags are c0_ok: nu_+/T <= c0_ratio_max, and c1_ok:
    either h nu_+ <= c1_h_nu_max, or both e^{2 h nu_+}/(Th) <=
    c1_consistency_max and h^2 T <= c1_h2t_max.  The keyword thresholds
    are reported back alongside the flags.
    """
    h = check_bin_width(h)
    nu_plus = float(nu_plus)
    T = float(T)
    if nu_plus < 0:
        raise ValueError(f"nu_plus must be nonnegative, got {nu_plus}")
    if T < h:
        raise ValueError(f"observation length T must be >= h, got T={T}, h={h}")
    hnu = h * nu_plus
    th = T * h
    report = DiagnosticsReport(
        h_nu_plus=hnu,
        nu_plus_over_T=nu_plus / T,
        xi1_lower=math.expm1(2.0 * hnu) / th,
        xi1_upper=math.expm1(4.0 * hnu) / th,
        eps2_bound=3.0 * (math.expm1(4.0 * hnu) / T) ** 2
        + 3.0 * (h / T**3) * math.expm1(8.0 * hnu),
        xi2_lower=2.0 * (1.0 - h / T) * (math.expm1(2.0 * hnu) / T) ** 2,
        c0_ok=(nu_plus / T) <= c0_ratio_max,
        c1_ok=hnu <= c1_h_nu_max
        or (math.exp(2.0 * hnu) / th <= c1_consistency_max and h * h * T <= c1_h2t_max),
        thresholds={
            "c0_ratio_max": c0_ratio_max,
            "c1_h_nu_max": c1_h_nu_max,
            "c1_consistency_max": c1_consistency_max,
            "c1_h2t_max": c1_h2t_max,
        },
    )
    return report
