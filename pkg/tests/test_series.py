"""Tests of the truncated power-series algebra."""

import math

import numpy as np
import pytest

from decompound.series import (
    BivarSeries,
    TruncSeries,
    bivar_exp,
    bivar_taylor_J,
    series_exp,
    series_log,
    taylor_coefficient_table,
)


def cauchy_log_coeffs(p, order, grid=4096):
    """Independent oracle: Fourier coefficients of log p(e^{i theta})."""
    theta = 2 * np.pi * np.arange(grid) / grid
    values = np.polyval(p[::-1], np.exp(1j * theta))
    coef = np.fft.fft(np.log(values)) / grid
    return coef[: order + 1].real


def test_log_poisson_pmf_is_pure_first_order():
    p = TruncSeries([math.exp(-1), math.exp(-1), math.exp(-1) / 2])
    b = series_log(p)
    assert b.coeffs == pytest.approx([-1.0, 1.0, 0.0], abs=1e-14)


def test_log_identity_series():
    b = series_log(TruncSeries([1.0, 0.0, 0.0]))
    assert b.coeffs == pytest.approx([0.0, 0.0, 0.0], abs=0)


def test_log_closed_form_example():
    # exact arithmetic: b1 = 1/8, b2 = 0.1/0.8 - (1/2)(1/8)^2 = 15/128
    b = series_log(TruncSeries([0.8, 0.1, 0.1]))
    assert b.coeffs == pytest.approx([math.log(0.8), 0.125, 15 / 128], abs=1e-15)


def test_log_matches_cauchy_formula_oracle():
    p = np.array([0.55, 0.2, 0.15, 0.07, 0.03])
    b = series_log(TruncSeries(p))
    assert b.coeffs == pytest.approx(cauchy_log_coeffs(p, 4), abs=1e-10)


def test_log_requires_positive_leading_coefficient():
    with pytest.raises(ValueError):
        series_log(TruncSeries([0.0, 1.0]))
    with pytest.raises(ValueError):
        series_log(TruncSeries([-0.5, 1.5]))


def test_exp_poisson_exponent():
    a = np.zeros(8)
    a[0], a[1] = -1.0, 1.0
    p = series_exp(TruncSeries(a))
    expect = [math.exp(-1) / math.factorial(k) for k in range(8)]
    assert p.coeffs == pytest.approx(expect, rel=1e-14)


def test_exp_zero_series():
    p = series_exp(TruncSeries(np.zeros(5)))
    assert p.coeffs == pytest.approx([1.0, 0.0, 0.0, 0.0, 0.0], abs=0)


def test_exp_compound_exponent_closed_forms():
    # h=0.1, nu=(2,1): p_0 = e^{-0.3}, p_1 = e^{-0.3} 0.2, p_2 = e^{-0.3}(0.02+0.1)
    p = series_exp(TruncSeries([-0.3, 0.2, 0.1]))
    e = math.exp(-0.3)
    assert p.coeffs == pytest.approx([e, 0.2 * e, 0.12 * e], rel=1e-14)


def test_exp_log_round_trip_random_series():
    # draws from the model class: c_0 = e^{a_0} in (0.1, 1), bounded log
    rng = np.random.default_rng(42)
    for _ in range(50):
        order = rng.integers(1, 21)
        a = np.zeros(order + 1)
        a[1:] = rng.uniform(0.0, 0.4, size=order)
        a[0] = -rng.uniform(0.05, 2.3)
        p = series_exp(TruncSeries(a))
        assert 0.1 < p.coeffs[0] < 1.0
        assert np.max(np.abs(series_log(p).coeffs - a)) < 1e-12
        back = series_exp(series_log(p))
        assert np.max(np.abs(back.coeffs - p.coeffs)) < 1e-12


def test_exp_log_round_trip_signed_series():
    rng = np.random.default_rng(43)
    for _ in range(30):
        order = rng.integers(1, 9)
        coeffs = rng.uniform(-0.3, 0.3, size=order + 1)
        coeffs[0] = rng.uniform(0.4, 1.0)
        p = TruncSeries(coeffs)
        back = series_exp(series_log(p))
        assert np.max(np.abs(back.coeffs - p.coeffs)) < 1e-12


def test_bivar_exp_factorizes_for_separable_exponent():
    # exp(a(x) + b(y)) = exp(a) exp(b): outer-product coefficients
    ax = np.array([0.3, -0.4, 0.2])
    by = np.array([0.0, 0.5, -0.1, 0.05])
    mat = np.zeros((3, 4))
    mat[:, 0] += ax
    mat[0, :] += by
    out = bivar_exp(BivarSeries(mat)).coeffs
    from decompound.series import _exp_coeffs

    expect = np.outer(_exp_coeffs(ax), _exp_coeffs(by))
    assert np.max(np.abs(out - expect)) < 1e-14


def test_taylor_corner_value_matches_variance_of_total_rate():
    h, rates = 0.1, np.array([2.0, 1.0])
    j = bivar_taylor_J(rates, h, 0, 0, 1, 1)
    assert j == pytest.approx(math.expm1(0.3) / 0.1, rel=1e-13)
    assert j == pytest.approx(3.498588, abs=5e-7)


def test_taylor_first_rate_variance():
    h, rates = 0.1, np.array([2.0, 1.0])
    j = bivar_taylor_J(rates, h, 1, 1, 0, 0)
    assert j == pytest.approx(math.exp(0.3) * (2.0 + 0.1 * 4.0), rel=1e-13)
    assert j == pytest.approx(3.2396611, abs=5e-8)


def test_taylor_zero_profile_vanishes():
    rates = np.zeros(4)
    for n1, n2, a1, a2 in [(0, 0, 1, 1), (2, 3, 0, 0), (1, 0, 1, 0), (4, 4, 1, 1)]:
        assert bivar_taylor_J(rates, 0.05, n1, n2, a1, a2) == 0.0


def test_taylor_closed_forms_random_profiles():
    rng = np.random.default_rng(7)
    for _ in range(30):
        k = rng.integers(2, 6)
        rates = rng.uniform(0.2, 4.0, size=k)
        h = rng.uniform(0.01, 3.0 / rates.sum())
        hnu = h * rates.sum()
        assert bivar_taylor_J(rates, h, 0, 0, 1, 1) == pytest.approx(
            math.expm1(hnu) / h, rel=1e-12
        )
        assert bivar_taylor_J(rates, h, 1, 2, 0, 0) == pytest.approx(
            math.exp(hnu) * h * rates[0] * (rates[1] - rates[0] - h * rates[0] ** 2 / 2),
            rel=1e-10,
            abs=1e-12,
        )


def test_taylor_table_symmetry_in_orders():
    rng = np.random.default_rng(3)
    rates = rng.uniform(0.0, 5.0, size=5)
    for alpha in (0, 1):
        table = taylor_coefficient_table(rates, 0.07, 6, 6, alpha, alpha)
        assert np.max(np.abs(table - table.T)) < 1e-12


def test_trunc_series_rejects_nonfinite():
    with pytest.raises(ValueError):
        TruncSeries([1.0, np.nan])
    with pytest.raises(ValueError):
        TruncSeries([])


def test_bivar_series_must_be_rectangular_matrix():
    with pytest.raises(ValueError):
        BivarSeries(np.zeros(3))
    with pytest.raises(ValueError):
        BivarSeries(np.array([[1.0, np.inf], [0.0, 0.0]]))
