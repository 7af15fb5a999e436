"""Empirical characteristic function on a frequency grid.

The ECF of integer counts is the trigonometric polynomial whose
coefficients are the histogram frequencies, so a zero-padded FFT
evaluates it exactly.  The complex logarithm is made phase-continuous by
unwrapping, the winding number of the closed loop around the origin is
the branch diagnostic, and two loop corrections are provided: shrinking
towards 1 and radial editing of the polynomial roots inside (or near)
the unit disc.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    CorrectionFailureError,
    DegeneratePolynomialError,
    RootConvergenceError,
    SingularEcfError,
    UnwrapFailureError,
)
from .simulate import BinSeries
from .validation import as_float_array, check_open_unit_interval, readonly

__all__ = [
    "CoeffPoly",
    "EcfLog",
    "SHRINK_LADDER",
    "histogram",
    "default_grid_size",
    "ecf_eval",
    "continuous_log",
    "shrink",
    "shrink_adaptive",
    "edit_zeros",
    "polynomial_roots",
]

#: Shrinking parameters tried in turn by the adaptive correction.
SHRINK_LADDER = (0.005, 0.01, 0.02, 0.04, 0.08, 0.16)

_MODULUS_FLOOR = 1e-14


@dataclass(frozen=True)
class CoeffPoly:
    """Real coefficients c_0..c_K of a generating polynomial.

    ``normalized`` marks vectors summing to 1 (histograms and their
    edited analogs).  Entries of edited vectors may be negative; only
    the sum constraint is enforced.
    """

    coeffs: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        arr = as_float_array(self.coeffs, "coeffs")
        if arr.size < 1:
            raise ValueError("coefficient vector must not be empty")
        if self.normalized and abs(arr.sum() - 1.0) > 1e-12:
            raise ValueError(f"normalized coefficients must sum to 1, got {arr.sum()!r}")
        object.__setattr__(self, "coeffs", readonly(arr))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1


@dataclass(frozen=True)
class EcfLog:
    """ECF samples on the grid theta_j = 2 pi j / G.

    ``log_values`` and ``winding`` stay None until
    :func:`continuous_log` fills them.  The source coefficients travel
    along so the grid can be refined without outside help.
    """

    grid_size: int
    values: np.ndarray
    coeffs: np.ndarray
    log_values: np.ndarray | None = None
    winding: int | None = None


def histogram(bins: BinSeries) -> CoeffPoly:
    """Empirical frequencies c_k = #{l : Z_l = k} / L."""
    freq = np.bincount(bins.counts) / bins.L
    return CoeffPoly(freq, normalized=True)


def default_grid_size(degree: int) -> int:
    """Smallest power of two >= max(256, 8 (K+1))."""
    need = max(256, 8 * (degree + 1))
    return 1 << (need - 1).bit_length()


def ecf_eval(poly: CoeffPoly, G: int) -> EcfLog:
    """Evaluate sum_k c_k e^{i k theta_j} on the G-point grid via FFT."""
    G = int(G)
    if G < 4 * (poly.degree + 1):
        raise ValueError(
            f"grid size {G} too small for degree {poly.degree}; need >= {4 * (poly.degree + 1)}"
        )
    values = _eval_on_grid(poly.coeffs, G)
    return EcfLog(grid_size=G, values=values, coeffs=poly.coeffs)


def _eval_on_grid(coeffs: np.ndarray, G: int) -> np.ndarray:
    padded = np.zeros(G, dtype=complex)
    padded[: coeffs.size] = coeffs
    return np.fft.ifft(padded) * G


def continuous_log(ecf: EcfLog, max_doublings: int = 12) -> EcfLog:
    """Fill the phase-continuous logarithm and the winding number.

    Phases start at arg gamma(0) and successive steps are the principal
    arguments of value ratios, valid once no step exceeds pi/2; the grid
    is doubled until that holds.  The winding number is the exact
    integer (phase after the full loop - phase before) / 2 pi.
    """
    G, values = ecf.grid_size, ecf.values
    for _ in range(max_doublings + 1):
        if np.min(np.abs(values)) < _MODULUS_FLOOR:
            raise SingularEcfError(
                "empirical characteristic function vanishes on the grid"
            )
        steps = np.angle(np.roll(values, -1) / values)
        if np.max(np.abs(steps)) <= np.pi / 2:
            break
        G *= 2
        values = _eval_on_grid(ecf.coeffs, G)
    else:
        raise UnwrapFailureError(
            f"phase steps still exceed pi/2 after {max_doublings} grid doublings"
        )
    phase = np.angle(values[0]) + np.concatenate(([0.0], np.cumsum(steps[:-1])))
    total = steps.sum() / (2.0 * np.pi)
    winding = int(round(total))
    if abs(total - winding) > 1e-6:
        raise UnwrapFailureError(f"winding number {total} is not an integer")
    log_values = np.log(np.abs(values)) + 1j * phase
    return replace(
        ecf, grid_size=G, values=values, log_values=log_values, winding=winding
    )


def shrink(poly: CoeffPoly, delta: float) -> CoeffPoly:
    """Pull the ECF loop towards 1: gamma -> delta + (1 - delta) gamma."""
    delta = check_open_unit_interval(delta, "delta")
    coeffs = (1.0 - delta) * np.asarray(poly.coeffs)
    coeffs[0] += delta
    return CoeffPoly(coeffs, normalized=poly.normalized)


def shrink_adaptive(
    poly: CoeffPoly, ladder: tuple[float, ...] = SHRINK_LADDER
) -> tuple[CoeffPoly, float]:
    """Smallest ladder delta whose shrunk loop has winding number zero."""
    for delta in ladder:
        candidate = shrink(poly, delta)
        log = continuous_log(ecf_eval(candidate, default_grid_size(candidate.degree)))
        if log.winding == 0:
            return candidate, delta
    raise CorrectionFailureError(
        f"no shrinking parameter in {ladder} removed the winding"
    )


def polynomial_roots(
    coeffs, max_iter: int = 200, tol: float = 1e-13
) -> np.ndarray:
    """All complex roots by Aberth-Ehrlich simultaneous iteration.

    Initial guesses sit on a circle of radius |c_0/c_K|^(1/K); zero
    roots (a vanishing constant term) are factored out beforehand.
    Residuals are checked by the caller.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.size == 0 or c[-1] == 0.0:
        raise ValueError("leading coefficient must be nonzero")
    n_zero = int(np.argmax(c != 0.0))
    zero_roots = np.zeros(n_zero, dtype=complex)
    c = c[n_zero:]
    K = c.size - 1
    if K == 0:
        return zero_roots
    radius = abs(c[0] / c[-1]) ** (1.0 / K)
    angles = 2.0 * np.pi * (np.arange(K) + 0.376241) / K
    w = radius * np.exp(1j * angles)
    converged = False
    for _ in range(max_iter):
        p = np.zeros_like(w)
        dp = np.zeros_like(w)
        for coef in c[::-1]:
            dp = dp * w + p
            p = p * w + coef
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dp != 0, p / np.where(dp != 0, dp, 1.0), 0.0)
            diffs = w[:, None] - w[None, :]
            np.fill_diagonal(diffs, np.inf)
            repulsion = np.sum(1.0 / diffs, axis=1)
            denom = 1.0 - newton * repulsion
            corr = np.where(np.abs(denom) > _MODULUS_FLOOR, newton / np.where(denom != 0, denom, 1.0), newton)
        w = w - corr
        if np.max(np.abs(corr)) < tol * (1.0 + np.max(np.abs(w))):
            converged = True
            break
    if not converged:
        # accept a stalled iteration only if the residuals are already tiny
        resid = _poly_eval(c, w)
        if np.max(np.abs(resid)) > 1e-9 * np.max(np.abs(c)):
            raise RootConvergenceError(
                f"root iteration did not converge within {max_iter} steps"
            )
    return np.concatenate([zero_roots, w])


def _poly_eval(coeffs: np.ndarray, w: np.ndarray) -> np.ndarray:
    out = np.zeros_like(w)
    for coef in coeffs[::-1]:
        out = out * w + coef
    return out


def _expand_from_roots(roots: np.ndarray) -> np.ndarray:
    """Ascending coefficients of prod (w - alpha_k), small moduli first."""
    out = np.array([1.0 + 0.0j])
    for r in sorted(roots, key=abs):
        out = np.convolve(out, np.array([-r, 1.0 + 0.0j]))
    return out


def edit_zeros(poly: CoeffPoly, eps: float) -> CoeffPoly:
    """Move polynomial roots out of the unit disc and re-expand.

    Roots with |alpha| <= 1 + eps are pushed radially to modulus
    1 + eps; the product of the edited factors is renormalized so the
    value at 1 stays 1.  The result is zero-free on the closed unit
    disc, hence has winding number zero.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    coeffs = np.asarray(poly.coeffs)
    nz = np.nonzero(coeffs)[0]
    if nz.size == 0:
        raise ValueError("cannot edit the zero polynomial")
    coeffs = coeffs[: nz[-1] + 1]
    if coeffs.size == 1:
        return poly
    roots = polynomial_roots(coeffs)
    resid = np.max(np.abs(_poly_eval(coeffs.astype(complex), roots)))
    if resid > 1e-9 * np.max(np.abs(coeffs)):
        raise RootConvergenceError(
            f"root residual {resid:.3e} exceeds 1e-9 * max coefficient"
        )
    if np.min(np.abs(roots - 1.0)) <= 1e-10:
        raise DegeneratePolynomialError("generating polynomial has a root at 1")
    moduli = np.abs(roots)
    inside = moduli <= 1.0 + eps
    edited = roots.copy()
    # a root exactly at the origin has no radial direction; send it to 1+eps
    at_origin = inside & (moduli < _MODULUS_FLOOR)
    safe = np.where(moduli < _MODULUS_FLOOR, 1.0, moduli)
    edited[inside] = (1.0 + eps) * roots[inside] / safe[inside]
    edited[at_origin] = 1.0 + eps
    if not inside.any():
        return poly
    expanded = _expand_from_roots(edited)
    expanded /= expanded.sum()
    imag_scale = np.max(np.abs(expanded.imag))
    if imag_scale > 1e-8 * max(1.0, np.max(np.abs(expanded.real))):
        raise RootConvergenceError(
            f"edited coefficients have imaginary residue {imag_scale:.3e}"
        )
    out = CoeffPoly(expanded.real, normalized=True)
    check = continuous_log(ecf_eval(out, default_grid_size(out.degree)))
    if check.winding != 0:
        raise CorrectionFailureError("editing left a nonzero winding number")
    return out
