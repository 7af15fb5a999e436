"""scikit-learn compatible front end.

``JumpRateEstimator`` wraps the estimation pipeline in the familiar
``fit`` / ``get_params`` / ``set_params`` shape so it can be cloned,
grid-searched and composed like any other estimator.  X is the series
of bin counts (1-D, or a single-column 2-D array).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .covariance import cov_rates, cov_tails, plug_in_spec
from .estimate import EstimationOptions, estimate_rates_fourier
from .inference import ScreeningTable, TestResult, screening_report, wald_test
from .simulate import BinSeries
from .validation import check_counts

__all__ = ["JumpRateEstimator"]


class JumpRateEstimator(BaseEstimator):
    """Recover jump rates nu_1..nu_M from one binned count trajectory.

    Parameters
    ----------
    bin_width : float
        Width h of the sampling bins, in seconds.  Rates come out in
        events per second.
    n_rates : int
        Number of orders M to estimate.
    grid_size : int or None
        ECF grid size; None selects the default power of two.
    correction : str
        "auto-edit" (default), "auto-shrink" or "none"; applied only
        when the ECF loop has nonzero winding number.
    shrink_delta : float or None
        Fixed shrinking parameter; None lets the ladder choose.
    edit_eps : float
        Radius excess used when editing polynomial roots.
    cov_truncation : int or None
        Truncation order K of the plug-in covariance kernel (default:
        ``n_rates``).

    Attributes
    ----------
    rates_ : ndarray of shape (n_rates,)
        Estimated rates; entries may be negative.
    nu_plus_ : float
        Estimated total jump rate.
    tails_ : ndarray of shape (n_rates,)
        Estimated tail sums rho_hat_1..rho_hat_M.
    winding_ : int
        Winding number of the uncorrected ECF loop.
    correction_ : tuple
        (kind, parameter) of the applied correction, ("none", None)
        when nothing was needed.
    rate_covariance_, tail_covariance_ : ndarray
        Plug-in covariance matrices of ``rates_`` and ``tails_``
        (already divided by the observation length).
    standard_errors_ : ndarray
        Square roots of the diagonal of ``rate_covariance_``.
    observation_time_ : float
        T = h * L in seconds.
    """

    def __init__(
        self,
        bin_width: float = 1.0,
        n_rates: int = 12,
        grid_size: int | None = None,
        correction: str = "auto-edit",
        shrink_delta: float | None = None,
        edit_eps: float = 0.075,
        cov_truncation: int | None = None,
    ):
        self.bin_width = bin_width
        self.n_rates = n_rates
        self.grid_size = grid_size
        self.correction = correction
        self.shrink_delta = shrink_delta
        self.edit_eps = edit_eps
        self.cov_truncation = cov_truncation

    def _options(self) -> EstimationOptions:
        return EstimationOptions(
            nmax=self.n_rates,
            grid_size=self.grid_size,
            correction=self.correction,
            delta=self.shrink_delta,
            eps=self.edit_eps,
        )

    def fit(self, X, y=None):
        """Estimate rates, tails and plug-in covariances from bin counts."""
        counts = check_counts(X, "X")
        bins = BinSeries(self.bin_width, counts)
        result = estimate_rates_fourier(bins, self._options())
        spec = plug_in_spec(
            result.rates, bins.h, self.cov_truncation or self.n_rates
        )
        omega = cov_rates(spec, bins.T, self.n_rates)
        sigma = cov_tails(spec, bins.T, self.n_rates)
        self.result_ = result
        self.bins_ = bins
        self.rates_ = result.rates.rates
        self.nu_plus_ = result.nu_plus_hat
        self.tails_ = result.tails
        self.winding_ = result.winding_before
        self.correction_ = (result.correction, result.correction_parameter)
        self.rate_covariance_ = omega.per_time
        self.tail_covariance_ = sigma.per_time
        self.standard_errors_ = np.sqrt(np.maximum(np.diag(omega.per_time), 0.0))
        self.observation_time_ = bins.T
        self._omega = omega
        return self

    def _check_fitted(self):
        if not hasattr(self, "result_"):
            raise NotFittedError("call fit before using this estimator")

    def screening(self) -> ScreeningTable:
        """Screening table (n, nu_hat, rho_hat, V, p) for the fitted data."""
        self._check_fitted()
        return screening_report(
            self.bins_, self.n_rates, self._options(), self.cov_truncation
        )

    def test_linear(self, A) -> TestResult:
        """Wald test of A nu = 0 against the fitted rates."""
        self._check_fitted()
        return wald_test(self.result_.rates, self._omega, A, self.observation_time_)
