"""Coefficient extraction from circle samples and density reconstruction.

Sampling the disk-coordinate transform on M equispaced points of a circle of
radius r < 1 turns the truncated power series into a DFT system: an inverse
FFT followed by entrywise division by r^j recovers the coefficients.  The
density then comes from the boundary values of the imaginary part, evaluated
on the upper half of the unit circle where the inversion formula reads
f(J(e^{i*theta})) = Im(sum_j g_j e^{i*j*theta}) / pi for theta in (0, pi);
the multiplicative variant recovers x*f(x) and divides by x afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, InvalidSupportError, emit_warning
from .measures import SupportInterval

__all__ = [
    "CoefficientVector",
    "coefficients_from_circle",
    "density_from_coefficients",
    "series_moments",
]


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """First m power-series coefficients g_1..g_m recovered at radius r_c."""

    r_c: float
    m: int
    g: np.ndarray

    def __post_init__(self):
        self.g.setflags(write=False)


def coefficients_from_circle(values, r_c: float, m: int, warn=None) -> CoefficientVector:
    """Recover g_1..g_m from samples values_j ~ script-transform(r_c * xi_M^j).

    The index-j phase factor of the sampling identity is removed before the
    inverse DFT; entry k-1 is then divided by r_c**k.  Coefficients with
    r_c**j below machine noise are unreliable and trigger a warning.
    """
    h = np.asarray(values, dtype=complex)
    big_m = h.size
    if m > big_m:
        raise InvalidParameterError(f"cannot keep {m} coefficients from {big_m} samples")
    if not (0.0 < r_c < 1.0):
        raise InvalidParameterError(f"r_c must be in (0,1), got {r_c}")
    if r_c**m < 1e-15:
        emit_warning(
            warn,
            f"r_c**m = {r_c ** m:.3e} is below noise level; trailing coefficients are unreliable",
        )
    j = np.arange(big_m)
    phase = np.exp(-2j * np.pi * j / big_m)
    x = np.fft.fft(h * phase) / big_m
    g = x[:m] / r_c ** np.arange(1, m + 1)
    return CoefficientVector(r_c=float(r_c), m=int(m), g=g)


def density_from_coefficients(
    coeffs: CoefficientVector,
    support: SupportInterval,
    grid_size: int | None = None,
    kind: str = "additive",
    warn=None,
) -> np.ndarray:
    """Density grid from the truncated series, as an array of (x, f) rows.

    Evaluates theta_k = pi*k/grid_size for k = 0..grid_size (each x once,
    endpoints included where the density vanishes for sqrt-boundary
    measures).  Negative values (quadrature noise) are clamped to zero and
    the largest clamp magnitude is reported through ``warn``.
    """
    if kind not in ("additive", "multiplicative"):
        raise InvalidParameterError(f"unknown recovery kind {kind!r}")
    m = coeffs.m
    if grid_size is None:
        grid_size = max(m, 200)
    if grid_size < m:
        raise InvalidParameterError(f"grid_size {grid_size} must be at least m = {m}")
    if kind == "multiplicative" and (support.a <= 0.0 <= support.b):
        raise InvalidSupportError(
            "multiplicative recovery divides by x; support must not contain 0"
        )
    theta = np.pi * np.arange(grid_size + 1) / grid_size
    x = support.center + support.halfwidth * np.cos(theta)
    series = np.exp(1j * np.outer(theta, np.arange(1, m + 1))) @ coeffs.g
    f = series.imag / np.pi
    if kind == "multiplicative":
        f = f / x
    clamp = max(0.0, float(-f.min()))
    if clamp > 0.0:
        emit_warning(warn, f"clamped negative density values of magnitude up to {clamp:.3e}")
    f = np.maximum(f, 0.0)
    # theta runs b -> a; report ascending x.
    return np.column_stack((x[::-1], f[::-1]))


def series_moments(g: np.ndarray, support: SupportInterval, kind: str) -> tuple[float, float]:
    """First two raw moments of the measure from its series coefficients.

    Exact residue calculus at v = 0 of the moment contour integrals, in
    terms of the interval quarter-width L and center c:

      Cauchy series:  m1 = L^2 g_2 + c L g_1
                      m2 = L^3 (g_1 + g_3) + 2 c L^2 g_2 + c^2 L g_1
      T series:       m1 = L t_1
                      m2 = L^2 t_2 + c L t_1
    """
    L = 0.25 * support.width
    c = support.center
    g1 = complex(g[0]) if len(g) > 0 else 0.0
    g2 = complex(g[1]) if len(g) > 1 else 0.0
    g3 = complex(g[2]) if len(g) > 2 else 0.0
    if kind == "additive":
        m1 = L * L * g2 + c * L * g1
        m2 = L**3 * (g1 + g3) + 2.0 * c * L * L * g2 + c * c * L * g1
    elif kind == "multiplicative":
        m1 = L * g1
        m2 = L * L * g2 + c * L * g1
    else:
        raise InvalidParameterError(f"unknown series kind {kind!r}")
    return float(m1.real), float(m2.real)
