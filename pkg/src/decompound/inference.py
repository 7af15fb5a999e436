"""Hypothesis tests, screening tables and Monte Carlo power profiles.

Wald tests impose linear restrictions on the rate vector with a plug-in
covariance; the standardized tail statistics V_m = (T/Sigma_mm)^{1/2}
rho_hat_m screen for synchrony of order >= m; their maximum over a
range is calibrated by a parametric bootstrap under the fitted
truncated null.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats

from .covariance import CovMatrix, cov_tails, plug_in_spec
from .errors import EstimationError, SingularCovarianceError
from .estimate import EstimateResult, EstimationOptions, estimate_rates_fourier
from .model import RateProfile
from .simulate import BinSeries, simulate_bins
from .validation import check_positive_int, readonly

__all__ = [
    "TestResult",
    "PowerProfile",
    "VmStatistics",
    "ScreeningTable",
    "wald_test",
    "vm_statistics",
    "max_v_test",
    "power_profile",
    "screening_report",
]

_DEGENERATE_VARIANCE = 1e-12
_MAX_CONDITION = 1e12


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    kind: str
    df: int | None = None


@dataclass(frozen=True)
class PowerProfile:
    """Rejection frequencies beta_n of the tests "rho_n = 0" across replicates."""

    beta: np.ndarray
    reps: int
    threshold: float


@dataclass(frozen=True)
class VmStatistics:
    """Standardized tail statistics with degeneracy flags and provenance."""

    values: np.ndarray
    degenerate: np.ndarray
    estimate: EstimateResult
    sigma: CovMatrix


@dataclass(frozen=True)
class ScreeningTable:
    """One row per order: (n, nu_hat_n, rho_hat_n, V_n, p_n)."""

    orders: np.ndarray
    nu_hat: np.ndarray
    rho_hat: np.ndarray
    v: np.ndarray
    p: np.ndarray
    degenerate: np.ndarray

    def rows(self):
        return list(zip(self.orders, self.nu_hat, self.rho_hat, self.v, self.p))


def wald_test(est, omega: CovMatrix, A, T: float) -> TestResult:
    """Wald statistic W = T (A nu_hat)' (A Omega A')^{-1} (A nu_hat).

    A must have full row rank q and A Omega A' must be invertible
    (condition number <= 1e12); the p-value is the upper chi-square
    tail with q degrees of freedom.
    """
    rates = np.asarray(getattr(est, "rates", est), dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    q, m = A.shape
    if m != rates.size:
        raise ValueError(f"A has {m} columns but {rates.size} rates were estimated")
    if np.linalg.matrix_rank(A) < q:
        raise SingularCovarianceError("restriction matrix A is rank deficient")
    inner = A @ omega.entries @ A.T
    cond = np.linalg.cond(inner)
    if not np.isfinite(cond) or cond > _MAX_CONDITION:
        raise SingularCovarianceError(
            f"A Omega A' has condition number {cond:.3e} (limit {_MAX_CONDITION:.0e})"
        )
    av = A @ rates
    statistic = float(T * av @ np.linalg.solve(inner, av))
    return TestResult(
        statistic=statistic,
        p_value=float(stats.chi2.sf(statistic, q)),
        kind="wald",
        df=q,
    )


def _options_for(mmax: int, opts: EstimationOptions | None) -> EstimationOptions:
    opts = opts or EstimationOptions()
    if opts.nmax < mmax:
        opts = replace(opts, nmax=mmax)
    return opts


def vm_statistics(
    bins: BinSeries,
    mmax: int,
    opts: EstimationOptions | None = None,
    K: int | None = None,
) -> VmStatistics:
    """V_m = (T/Sigma_hat_mm)^{1/2} rho_hat_m for m = 1..mmax.

    Sigma_hat is the plug-in tail covariance with positive-part rates,
    truncated at K (default: the estimation order).  Entries with
    vanishing variance are reported as 0 and flagged.
    """
    mmax = check_positive_int(mmax, "mmax")
    opts = _options_for(mmax, opts)
    est = estimate_rates_fourier(bins, opts)
    spec = plug_in_spec(est.rates, bins.h, K or opts.nmax)
    sigma = cov_tails(spec, bins.T, mmax)
    diag = np.diag(sigma.entries)
    degenerate = diag <= _DEGENERATE_VARIANCE
    values = np.zeros(mmax)
    ok = ~degenerate
    values[ok] = np.sqrt(bins.T / diag[ok]) * est.tails[:mmax][ok]
    return VmStatistics(
        values=readonly(values),
        degenerate=readonly(degenerate),
        estimate=est,
        sigma=sigma,
    )


def _spawn(seed, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=seed, spawn_key=(index,))


def _map_indexed(fn, count: int, threads: int = 1) -> list:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, range(count)))
    return [fn(i) for i in range(count)]


def max_v_test(
    bins: BinSeries,
    m1: int,
    m2: int,
    B: int = 1000,
    seed: int = 0,
    opts: EstimationOptions | None = None,
    K: int | None = None,
    threads: int = 1,
) -> TestResult:
    """Bootstrap test of "rho_m = 0 for all m1 <= m <= m2" via V = max V_m.

    The reference distribution is parametric: B series are resimulated
    from the fitted profile truncated at m1 - 1 (positive parts), the
    null being true there by construction, and
    p = (1 + #{V* >= V}) / (B + 1).  A nonparametric resample would not
    satisfy the null, so it is not offered.
    """
    m1 = check_positive_int(m1, "m1", minimum=2)
    m2 = check_positive_int(m2, "m2", minimum=m1)
    B = check_positive_int(B, "B", minimum=100)
    observed = vm_statistics(bins, m2, opts, K)
    v_obs = float(np.max(observed.values[m1 - 1 : m2]))
    null_rates = np.maximum(observed.estimate.rates.rates[: m1 - 1], 0.0)
    null_profile = RateProfile(null_rates)

    def one_replicate(b: int) -> float:
        resampled = simulate_bins(null_profile, bins.h, bins.L, _spawn(seed, b))
        try:
            return float(np.max(vm_statistics(resampled, m2, opts, K).values[m1 - 1 : m2]))
        except EstimationError:
            return np.inf  # count failed replicates against the null

    v_null = np.array(_map_indexed(one_replicate, B, threads))
    p = (1.0 + float(np.count_nonzero(v_null >= v_obs))) / (B + 1.0)
    return TestResult(statistic=v_obs, p_value=p, kind="max_v")


def power_profile(
    profile: RateProfile,
    h: float,
    L: int,
    reps: int,
    threshold: float,
    nmax: int,
    seed: int = 0,
    opts: EstimationOptions | None = None,
    K: int | None = None,
    threads: int = 1,
) -> PowerProfile:
    """Monte Carlo rejection frequencies of "V_n > threshold" per order."""
    reps = check_positive_int(reps, "reps")
    nmax = check_positive_int(nmax, "nmax")

    def one_replicate(r: int) -> np.ndarray:
        bins = simulate_bins(profile, h, L, _spawn(seed, r))
        return vm_statistics(bins, nmax, opts, K).values > threshold

    exceed = np.sum(_map_indexed(one_replicate, reps, threads), axis=0)
    return PowerProfile(
        beta=readonly(exceed / reps), reps=reps, threshold=float(threshold)
    )


def screening_report(
    bins: BinSeries,
    nmax: int,
    opts: EstimationOptions | None = None,
    K: int | None = None,
) -> ScreeningTable:
    """Per-order table of rates, tails, V statistics and one-sided p-values."""
    vm = vm_statistics(bins, nmax, opts, K)
    return ScreeningTable(
        orders=readonly(np.arange(1, nmax + 1)),
        nu_hat=readonly(np.array(vm.estimate.rates.rates[:nmax])),
        rho_hat=readonly(np.array(vm.estimate.tails[:nmax])),
        v=vm.values,
        p=readonly(stats.norm.sf(vm.values)),
        degenerate=vm.degenerate,
    )
