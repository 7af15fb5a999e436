"""Decompounding of integer-marked compound Poisson count data.

Recovers the jump-rate profile nu_1..nu_K of a compound Poisson process
from a single equidistantly binned trajectory, with plug-in asymptotic
covariances, hypothesis tests, empirical-characteristic-function loop
corrections, and a Monte Carlo simulation harness.
"""

from .covariance import (
    CovMatrix,
    KernelSpec,
    cov_cross,
    cov_quadrature_oracle,
    cov_rates,
    cov_tails,
    kernel_gamma,
    plug_in_spec,
)
from .ecf import (
    CoeffPoly,
    EcfLog,
    continuous_log,
    ecf_eval,
    edit_zeros,
    histogram,
    shrink,
)
from .errors import (
    CorrectionFailureError,
    DecompoundError,
    DegeneratePolynomialError,
    DegenerateProfileError,
    EstimationError,
    NoEmptyBinsError,
    RootConvergenceError,
    SingularCovarianceError,
    SingularEcfError,
    UnwrapFailureError,
)
from .estimate import (
    EstimatedProfile,
    EstimateResult,
    EstimationOptions,
    Reparameterization,
    estimate_functional,
    estimate_rates_fourier,
    estimate_rates_histogram,
    estimate_tails,
    reparameterize,
)
from .estimator import JumpRateEstimator
from .inference import (
    PowerProfile,
    ScreeningTable,
    TestResult,
    VmStatistics,
    max_v_test,
    power_profile,
    screening_report,
    vm_statistics,
    wald_test,
)
from .model import (
    DiagnosticsReport,
    RateProfile,
    asymptotics_report,
    cf_theoretical,
    pmf_theoretical,
    tail_sum,
)
from .series import (
    BivarSeries,
    TruncSeries,
    bivar_taylor_J,
    series_exp,
    series_log,
)
from .simulate import (
    BinSeries,
    RasterEvent,
    bootstrap_resample,
    simulate_bins,
    simulate_raster,
)

__version__ = "0.1.0"

__all__ = [
    "BinSeries",
    "BivarSeries",
    "CoeffPoly",
    "CorrectionFailureError",
    "CovMatrix",
    "DecompoundError",
    "DegeneratePolynomialError",
    "DegenerateProfileError",
    "DiagnosticsReport",
    "EcfLog",
    "EstimatedProfile",
    "EstimateResult",
    "EstimationError",
    "EstimationOptions",
    "JumpRateEstimator",
    "KernelSpec",
    "NoEmptyBinsError",
    "PowerProfile",
    "RasterEvent",
    "RateProfile",
    "Reparameterization",
    "RootConvergenceError",
    "ScreeningTable",
    "SingularCovarianceError",
    "SingularEcfError",
    "TestResult",
    "TruncSeries",
    "UnwrapFailureError",
    "VmStatistics",
    "asymptotics_report",
    "bivar_taylor_J",
    "bootstrap_resample",
    "cf_theoretical",
    "continuous_log",
    "cov_cross",
    "cov_quadrature_oracle",
    "cov_rates",
    "cov_tails",
    "ecf_eval",
    "edit_zeros",
    "estimate_functional",
    "estimate_rates_fourier",
    "estimate_rates_histogram",
    "estimate_tails",
    "histogram",
    "kernel_gamma",
    "max_v_test",
    "plug_in_spec",
    "pmf_theoretical",
    "power_profile",
    "reparameterize",
    "screening_report",
    "series_exp",
    "series_log",
    "shrink",
    "simulate_bins",
    "simulate_raster",
    "tail_sum",
    "vm_statistics",
    "wald_test",
]
