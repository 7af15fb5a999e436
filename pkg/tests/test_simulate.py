"""Tests of the simulation and resampling routines."""

import numpy as np
import pytest
from scipy import stats

from decompound.model import RateProfile
from decompound.simulate import (
    BinSeries,
    bin_raster,
    bootstrap_resample,
    simulate_bins,
    simulate_raster,
)

EXAMPLE1 = RateProfile([40.0, 10.0, 4.0, 3.0, 1.0])


def test_zero_profile_gives_zero_counts():
    bins = simulate_bins(RateProfile([0.0, 0.0]), 0.1, 50, seed=1)
    assert bins.counts.sum() == 0


def test_bin_moments_match_compound_formulas():
    # mean h sum n nu_n = 1.78, var h sum n^2 nu_n = 3.78 for Example 1 at h=0.02
    h, L = 0.02, 100_000
    bins = simulate_bins(EXAMPLE1, h, L, seed=2024)
    mean_true = h * 89.0
    var_true = h * 189.0
    se_mean = np.sqrt(var_true / L)
    assert abs(bins.counts.mean() - mean_true) < 5 * se_mean
    # variance of the sample variance approx (mu4 - var^2)/L; a crude bound suffices
    sample_var = bins.counts.var()
    mu4 = np.mean((bins.counts - bins.counts.mean()) ** 4)
    se_var = np.sqrt(max(mu4 - var_true**2, var_true) / L)
    assert abs(sample_var - var_true) < 5 * se_var


def test_small_sample_mean_within_spec_band():
    h, L = 0.02, 1500
    bins = simulate_bins(EXAMPLE1, h, L, seed=7)
    var_true = h * 189.0
    assert abs(bins.counts.mean() - 1.78) < 4 * np.sqrt(var_true / L)


def test_single_rate_counts_are_poisson():
    lam, h, L = 6.0, 0.1, 10_000
    bins = simulate_bins(RateProfile([lam]), h, L, seed=99)
    observed = np.bincount(bins.counts, minlength=8)
    k = np.arange(observed.size)
    expected = L * stats.poisson.pmf(k, lam * h)
    # pool the tail so expected cell counts stay reasonable
    keep = expected > 5
    obs = np.append(observed[keep], observed[~keep].sum())
    exp = np.append(expected[keep], expected[~keep].sum())
    _, p = stats.chisquare(obs, exp * obs.sum() / exp.sum())
    assert p > 0.001


def test_determinism_same_seed_same_counts():
    a = simulate_bins(EXAMPLE1, 0.02, 1000, seed=5)
    b = simulate_bins(EXAMPLE1, 0.02, 1000, seed=5)
    c = simulate_bins(EXAMPLE1, 0.02, 1000, seed=6)
    assert np.array_equal(a.counts, b.counts)
    assert not np.array_equal(a.counts, c.counts)


def test_raster_requires_enough_neurons():
    with pytest.raises(ValueError):
        simulate_raster(EXAMPLE1, N=4, T=1.0, seed=0)


def test_raster_single_neuron_poisson_train():
    events = simulate_raster(RateProfile([20.0]), N=1, T=50.0, seed=3)
    assert all(ev.neuron == 1 for ev in events)
    count = len(events)
    assert abs(count - 1000) < 5 * np.sqrt(1000)


def test_raster_mean_single_neuron_rate():
    # Example 2 population: (150 + 49)/20 spikes per second per neuron
    profile = RateProfile([150.0, 0, 0, 0, 0, 0, 7.0])
    T, N = 60.0, 20
    events = simulate_raster(profile, N=N, T=T, seed=11)
    rate = len(events) / (N * T)
    total = 199.0 * T
    se = np.sqrt((150.0 + 49.0 * 7.0) * T) / (N * T)
    assert abs(rate - total / (N * T)) < 5 * se
    assert {ev.neuron for ev in events} <= set(range(1, N + 1))
    assert all(0.0 <= ev.time <= T for ev in events)


def test_raster_bins_match_direct_simulation_in_law():
    profile = RateProfile([30.0, 0.0, 5.0])
    h, T = 0.005, 25.0
    L = int(T / h)
    events = simulate_raster(profile, N=6, T=T, seed=21)
    from_raster = bin_raster(events, h, L)
    direct = simulate_bins(profile, h, L, seed=22)
    _, p = stats.ks_2samp(from_raster.counts, direct.counts)
    assert p > 0.001


def test_bootstrap_constant_series_is_identity():
    bins = BinSeries(0.1, [3, 3, 3, 3])
    out = bootstrap_resample(bins, seed=0)
    assert np.array_equal(out.counts, bins.counts)
    assert out.h == bins.h


def test_bootstrap_single_bin():
    out = bootstrap_resample(BinSeries(0.2, [5]), seed=9)
    assert np.array_equal(out.counts, [5])


def test_bootstrap_mean_consistency():
    bins = simulate_bins(EXAMPLE1, 0.02, 2000, seed=31)
    means = [
        bootstrap_resample(bins, np.random.SeedSequence(31, spawn_key=(i,))).counts.mean()
        for i in range(1000)
    ]
    se = bins.counts.std() / np.sqrt(bins.L) / np.sqrt(1000)
    assert abs(np.mean(means) - bins.counts.mean()) < 4 * se


def test_bin_series_validation():
    with pytest.raises(ValueError):
        BinSeries(0.0, [1, 2])
    with pytest.raises(ValueError):
        BinSeries(0.1, [])
    with pytest.raises(ValueError):
        BinSeries(0.1, [1, -2])
    with pytest.raises(ValueError):
        BinSeries(0.1, [1.5, 2.0])
