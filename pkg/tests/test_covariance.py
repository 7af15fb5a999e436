"""Tests of the covariance kernel, Taylor evaluation and quadrature oracle."""

import math

import numpy as np
import pytest

from decompound.covariance import (
    CovMatrix,
    KernelSpec,
    cov_cross,
    cov_quadrature_oracle,
    cov_rates,
    cov_tails,
    kernel_gamma,
    plug_in_spec,
)
from decompound.estimate import EstimatedProfile
from decompound.model import RateProfile
from decompound.series import bivar_taylor_J


def test_kernel_vanishes_on_axes():
    spec = KernelSpec([2.0, 1.0], 0.1)
    theta = np.linspace(-3, 3, 11)
    assert np.max(np.abs(kernel_gamma(spec, 0.0, theta))) == 0.0
    assert np.max(np.abs(kernel_gamma(spec, theta, 0.0))) == 0.0


def test_kernel_value_at_pi_pi():
    # (e^{i pi} - 1)^2 = 4 for n=1 and 0 for n=2
    spec = KernelSpec([2.0, 1.0], 0.1)
    value = kernel_gamma(spec, math.pi, math.pi)
    assert value == pytest.approx(10.0 * math.expm1(0.8), rel=1e-12)


def test_kernel_small_h_limit():
    rates = np.array([3.0, 0.5, 1.5])
    t1, t2 = 1.3, -0.7
    n = np.arange(1, 4)
    limit = np.sum(
        rates
        * (np.exp(1j * (t1 + t2) * n) - np.exp(1j * t1 * n) - np.exp(1j * t2 * n) + 1)
    )
    values = [
        kernel_gamma(KernelSpec(rates, h), t1, t2) for h in (1e-3, 1e-4, 1e-5)
    ]
    errs = [abs(v - limit) for v in values]
    assert errs[2] < errs[1] < errs[0]
    assert errs[2] < 1e-3


def test_cov_rates_closed_forms():
    h, T = 0.1, 30.0
    spec = KernelSpec([2.0, 1.0], h)
    omega = cov_rates(spec, T, 4)
    hnu = 0.3
    assert omega.entries[0, 0] == pytest.approx(math.exp(hnu) * (2.0 + h * 4.0), rel=1e-12)
    assert omega.entries[0, 1] == pytest.approx(
        math.exp(hnu) * h * 2.0 * (1.0 - 2.0 - h * 4.0 / 2), rel=1e-12
    )
    assert omega.entries[0, 1] == pytest.approx(-0.323966, abs=5e-7)
    assert omega.scale_T == T
    assert omega.kind == "rates"


def test_cov_rates_small_h_uncorrelated_limit():
    # |Omega_nn(h) - nu_n| = O(h): halving h halves the error once h is
    # small enough that the linear term dominates (h nu_+ << 1)
    profile = RateProfile([40.0, 10.0, 4.0, 3.0, 1.0])
    for n in range(1, 6):
        diag_err = []
        for h in (0.002, 0.001, 0.0005):
            omega = cov_rates(KernelSpec.from_profile(profile, h), 1.0, 5)
            diag_err.append(abs(omega.entries[n - 1, n - 1] - profile.rates[n - 1]))
        assert 0.35 <= diag_err[1] / diag_err[0] <= 0.65
        assert 0.35 <= diag_err[2] / diag_err[1] <= 0.65
    # off-diagonals tend to zero
    omega = cov_rates(KernelSpec.from_profile(profile, 1e-5), 1.0, 5)
    off = omega.entries - np.diag(np.diag(omega.entries))
    assert np.max(np.abs(off)) < 0.05


def test_cov_tails_corner_and_zero_profile():
    h = 0.1
    spec = KernelSpec([2.0, 1.0], h)
    sigma = cov_tails(spec, 30.0, 3)
    assert sigma.entries[0, 0] == pytest.approx(math.expm1(0.3) / h, rel=1e-12)
    zero = cov_tails(KernelSpec([0.0, 0.0], h), 30.0, 3)
    assert np.max(np.abs(zero.entries)) == 0.0


def test_cov_cross_closed_form():
    spec = KernelSpec([2.0, 1.0], 0.1)
    value = cov_cross(spec, 30.0, 1, 1)
    assert value == pytest.approx(math.exp(0.3) * 2.0, rel=1e-12)
    assert value == pytest.approx(2.699718, abs=5e-7)
    assert cov_cross(KernelSpec([0.0, 1.0], 0.1), 30.0, 1, 1) == pytest.approx(
        0.0, abs=1e-12
    )


def test_taylor_vs_quadrature_random_cases():
    rng = np.random.default_rng(97)
    for _ in range(12):
        k = rng.integers(1, 6)
        rates = rng.uniform(0.0, 4.0, size=k)
        h = rng.uniform(0.01, 0.5)
        if h * rates.sum() > 3.0:
            h = 3.0 / rates.sum() * rng.uniform(0.3, 1.0)
        spec = KernelSpec(rates, h)
        n1, n2 = rng.integers(0, 9, size=2)
        a1, a2 = rng.integers(0, 2, size=2)
        taylor = bivar_taylor_J(rates, h, int(n1), int(n2), int(a1), int(a2))
        quad = cov_quadrature_oracle(spec, int(n1), int(n2), int(a1), int(a2))
        assert quad == pytest.approx(taylor, abs=1e-6, rel=1e-9)


def test_quadrature_zero_profile():
    spec = KernelSpec([0.0], 0.05)
    assert cov_quadrature_oracle(spec, 2, 3, 1, 1) == pytest.approx(0.0, abs=1e-15)


def test_plug_in_positive_parts():
    spec = plug_in_spec(EstimatedProfile([5.0, -1.0, 2.0]), 0.1, 3)
    assert spec.rates == pytest.approx([5.0, 0.0, 2.0], abs=0)
    only_first = plug_in_spec(EstimatedProfile([5.0, -1.0, 2.0]), 0.1, 1)
    assert only_first.rates == pytest.approx([5.0], abs=0)
    padded = plug_in_spec(EstimatedProfile([5.0]), 0.1, 4)
    assert padded.rates == pytest.approx([5.0, 0.0, 0.0, 0.0], abs=0)


def test_plug_in_variance_close_to_truth_over_replicates():
    import decompound as dc

    profile = RateProfile([40.0, 10.0, 4.0, 3.0, 1.0])
    h, T = 0.02, 30.0
    truth = cov_rates(KernelSpec.from_profile(profile, h), T, 5).entries[0, 0]
    within = 0
    reps = 60
    for r in range(reps):
        bins = dc.simulate_bins(profile, h, int(T / h), np.random.SeedSequence(41, spawn_key=(r,)))
        est = dc.estimate_rates_fourier(bins, dc.EstimationOptions(nmax=5))
        plug = cov_rates(plug_in_spec(est.rates, h, 5), T, 5).entries[0, 0]
        within += abs(plug - truth) <= 0.25 * truth
    assert within >= 0.9 * reps


def test_cov_matrix_validation():
    with pytest.raises(ValueError):
        CovMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]), 10.0, "rates")
    with pytest.raises(ValueError):
        CovMatrix(np.array([[-1.0, 0.0], [0.0, 1.0]]), 10.0, "rates")
    with pytest.raises(ValueError):
        CovMatrix(np.eye(2), 10.0, "weird")
    m = CovMatrix(np.eye(2) * 4.0, 8.0, "rates")
    assert m.per_time == pytest.approx(np.eye(2) * 0.5)


def test_kernel_spec_validation():
    with pytest.raises(ValueError):
        KernelSpec([-1.0], 0.1)
    with pytest.raises(ValueError):
        KernelSpec([1.0], 0.0)
    assert KernelSpec([1.0, 2.0], 0.1).K == 2
