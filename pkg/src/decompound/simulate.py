"""Exact simulation of the compound model and bootstrap resampling.

Bin counts are drawn directly: each bin independently receives
Poisson(h nu_n) jumps of every size n, which is exact because the
underlying processes have independent stationary increments.  The raster
generator produces the equivalent multivariate event-time picture by
sampling the jump times of each size-n process and assigning every jump
to a uniformly random n-subset of neurons.

All randomness flows through the counter-based Philox generator, so a
given seed reproduces identical output on any platform, and replicate
streams can be spawned independently for parallel runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import RateProfile
from .validation import check_bin_width, check_counts, check_positive_int, readonly

__all__ = [
    "BinSeries",
    "RasterEvent",
    "simulate_bins",
    "simulate_raster",
    "bootstrap_resample",
]


@dataclass(frozen=True)
class BinSeries:
    """Bin width h (seconds) and the observed integer counts Z_1..Z_L."""

    h: float
    counts: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "h", check_bin_width(self.h))
        object.__setattr__(self, "counts", readonly(check_counts(self.counts)))

    @property
    def L(self) -> int:
        return self.counts.size

    @property
    def T(self) -> float:
        """Observation length h * L in seconds."""
        return self.h * self.counts.size


@dataclass(frozen=True)
class RasterEvent:
    """A single spike: which neuron fired and when."""

    neuron: int
    time: float


def _generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def simulate_bins(profile: RateProfile, h: float, L: int, seed) -> BinSeries:
    """Draw L bin counts: Z_l = sum_n n * Poisson(h nu_n)."""
    h = check_bin_width(h)
    L = check_positive_int(L, "L")
    rng = _generator(seed)
    counts = np.zeros(L, dtype=np.int64)
    for n in range(1, profile.max_jump + 1):
        nu = profile.rates[n - 1]
        if nu > 0:
            counts += n * rng.poisson(h * nu, size=L)
    return BinSeries(h, counts)


def simulate_raster(profile: RateProfile, N: int, T: float, seed) -> list[RasterEvent]:
    """Event-time representation over a population of N neurons.

    Jumps of size n arrive as a Poisson process of rate nu_n on [0, T];
    each jump emits n simultaneous spikes on a uniformly random
    n-element subset of the neurons (maximum-entropy assignment).
    Neuron ids are 1-based.
    """
    N = check_positive_int(N, "N")
    T = float(T)
    if T <= 0:
        raise ValueError(f"T must be positive, got {T}")
    if N < profile.max_jump:
        raise ValueError(
            f"population size N={N} cannot host jumps of size {profile.max_jump}"
        )
    rng = _generator(seed)
    events: list[RasterEvent] = []
    for n in range(1, profile.max_jump + 1):
        nu = profile.rates[n - 1]
        if nu == 0.0:
            continue
        n_jumps = rng.poisson(nu * T)
        times = np.sort(rng.uniform(0.0, T, size=n_jumps))
        for t in times:
            members = rng.choice(N, size=n, replace=False)
            events.extend(RasterEvent(int(i) + 1, float(t)) for i in members)
    events.sort(key=lambda ev: (ev.time, ev.neuron))
    return events


def bin_raster(events: list[RasterEvent], h: float, L: int) -> BinSeries:
    """Pool raster events into bin counts (events in ((l-1)h, lh] go to bin l)."""
    h = check_bin_width(h)
    L = check_positive_int(L, "L")
    counts = np.zeros(L, dtype=np.int64)
    for ev in events:
        idx = min(int(np.ceil(ev.time / h)) - 1, L - 1)
        counts[max(idx, 0)] += 1
    return BinSeries(h, counts)


def bootstrap_resample(bins: BinSeries, seed) -> BinSeries:
    """L draws with replacement from the observed counts, same bin width."""
    rng = _generator(seed)
    return BinSeries(bins.h, rng.choice(bins.counts, size=bins.L, replace=True))
