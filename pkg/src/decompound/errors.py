"""Exception types shared across the package.

Argument and format problems raise plain :class:`ValueError` (CLI exit
code 2).  Numeric failures inside an estimation pipeline raise an
:class:`EstimationError` subclass (CLI exit code 3).
"""


class DecompoundError(Exception):
    """Base class for package-specific failures."""


class EstimationError(DecompoundError, RuntimeError):
    """A numeric or statistical failure while processing data."""


class NoEmptyBinsError(EstimationError):
    """No bin with count zero was observed, so log p_0 is undefined."""


class SingularEcfError(EstimationError):
    """The empirical characteristic function vanishes on the grid."""


class UnwrapFailureError(EstimationError):
    """Phase unwrapping did not stabilise within the refinement cap."""


class CorrectionFailureError(EstimationError):
    """No admissible correction produced a zero-winding loop."""


class RootConvergenceError(EstimationError):
    """The simultaneous root iteration did not converge."""


class DegeneratePolynomialError(EstimationError):
    """The generating polynomial cannot be edited (e.g. a root at 1)."""


class SingularCovarianceError(EstimationError):
    """A covariance block required by a test is singular or ill-conditioned."""


class DegenerateProfileError(EstimationError):
    """An estimated profile cannot be reparameterized (nu_plus <= 0)."""
