"""End-to-end free additive and multiplicative convolution.

Both pipelines follow the same four steps: build boundary tables for the two
input measures, locate the output support from the zeros of the inverse
transform's derivative, pick a circle of radius r_b inside the image of the
output transform (validated by the sign criterion) and a circle of radius
r_c in the disk coordinates, evaluate the output transform there, and hand
the samples to the recovery module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .contour import (
    BoundaryTable,
    ConvolutionContour,
    build_boundary_table,
    _g_additive_many,
    _g_additive_deriv_many,
    _t_multiplicative_many,
    _t_multiplicative_deriv_many,
)
from .conformal import joukowski, joukowski_inv, unit_grid
from .errors import (
    ContourTooSmallError,
    FreeConvError,
    InvalidContourError,
    InvalidParameterError,
    InvalidSupportError,
    emit_warning,
)
from .measures import MeasureSpec, RegularityClass, SupportInterval
from .recovery import (
    coefficients_from_circle,
    density_from_coefficients,
    series_moments,
)
from .transforms import TransformKind, eval_script_transform

__all__ = [
    "ContourConfig",
    "SupportResult",
    "ConvolutionResult",
    "find_support_additive",
    "find_support_multiplicative",
    "find_image_radius",
    "choose_inner_radius",
    "additive_convolve",
    "multiplicative_convolve",
]

# Points used to discretize the Cauchy integrals over the output-transform
# contour (curve Gamma and the transform evaluations on it).
GAMMA_POINTS = 400


@dataclass(frozen=True)
class ContourConfig:
    """Algorithm parameters.

    ``n_quad`` of None means each measure uses its regularity default (400
    points for sqrt-boundary densities, 4000 otherwise); ``r_a`` of None
    resolves to 1 - epsilon.
    """

    n_quad: int | None = None
    m_coeffs: int = 20
    epsilon: float = 0.05
    r_a: float | None = None
    support_tol: float = 1e-12
    radius_tol: float = 1e-3
    criterion_samples: int = 64

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise InvalidParameterError(f"epsilon must be in (0,1), got {self.epsilon}")
        r_a = self.resolved_r_a
        if not (0.0 < r_a < 1.0):
            raise InvalidParameterError(f"r_a must be in (0,1), got {r_a}")
        if self.m_coeffs < 1 or self.criterion_samples < 4:
            raise InvalidParameterError("m_coeffs and criterion_samples must be positive")
        if self.support_tol <= 0 or self.radius_tol <= 0:
            raise InvalidParameterError("tolerances must be positive")

    @property
    def resolved_r_a(self) -> float:
        return 1.0 - self.epsilon if self.r_a is None else self.r_a


@dataclass(frozen=True)
class SupportResult:
    xi_a: float
    xi_b: float
    a: float
    b: float


@dataclass(frozen=True, eq=False)
class ConvolutionResult:
    """Output of a convolution: support, contour radii, series coefficients,
    and the reconstructed density grid (rows of (x, f))."""

    support: SupportInterval
    xi_a: float
    xi_b: float
    r_b: float
    r_c: float
    coefficients: np.ndarray
    density_grid: np.ndarray
    warnings: tuple
    kind: str = "additive"

    def __post_init__(self):
        self.coefficients.setflags(write=False)
        self.density_grid.setflags(write=False)

    @property
    def xs(self) -> np.ndarray:
        return self.density_grid[:, 0]

    @property
    def density(self) -> np.ndarray:
        return self.density_grid[:, 1]

    def mass(self) -> float:
        return float(np.trapz(self.density, self.xs))

    def mean(self) -> float:
        m1, _ = series_moments(self.coefficients, self.support, self.kind)
        return m1

    def variance(self) -> float:
        m1, m2 = series_moments(self.coefficients, self.support, self.kind)
        return m2 - m1 * m1


def _bisect_derivative_zero(dfun, lo: float, hi: float, tol: float) -> float:
    """Bisect for the sign change of Re(dfun) on (lo, hi).

    The derivative tends to -inf at the origin-side endpoint, whose sign is
    known analytically and never evaluated.
    """
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if dfun(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _find_support(
    t1: BoundaryTable,
    t2: BoundaryTable,
    cfg: ContourConfig,
    g_many,
    dg_many,
    warn=None,
) -> SupportResult:
    guard = cfg.resolved_r_a - cfg.epsilon
    if guard <= 0:
        raise InvalidParameterError("epsilon guard exceeds the table radius")

    def script(table: BoundaryTable, v: float) -> float:
        return eval_script_transform(table.measure, table.kind, complex(v), table.n).real

    hi = min(script(t1, guard), script(t2, guard))
    lo = max(script(t1, -guard), script(t2, -guard))
    if not (lo < 0.0 < hi):
        raise InvalidContourError("transform guard values do not bracket 0")

    def dfun(w: float) -> float:
        return complex(dg_many(t1, t2, np.array([w], dtype=complex))).real

    # Positive side: derivative is -inf at 0+, so a nonpositive value at the
    # guarded endpoint means no sign change in the searchable interval.
    if dfun(hi) <= 0.0:
        emit_warning(
            warn,
            f"no sign change of the derivative in (0, {hi:.6g}); "
            "adopting the guarded endpoint (support may be inaccurate)",
        )
        xi_b = hi
    else:
        xi_b = _bisect_derivative_zero(dfun, 0.0, hi, cfg.support_tol)
    if dfun(lo) <= 0.0:
        emit_warning(
            warn,
            f"no sign change of the derivative in ({lo:.6g}, 0); "
            "adopting the guarded endpoint (support may be inaccurate)",
        )
        xi_a = lo
    else:
        xi_a = -_bisect_derivative_zero(lambda s: dfun(-s), 0.0, -lo, cfg.support_tol)
    a = complex(g_many(t1, t2, np.array([xi_a], dtype=complex))).real
    b = complex(g_many(t1, t2, np.array([xi_b], dtype=complex))).real
    if not a < b:
        raise InvalidSupportError(f"computed support endpoints are not ordered: {a}, {b}")
    return SupportResult(xi_a=xi_a, xi_b=xi_b, a=a, b=b)


def find_support_additive(
    t1: BoundaryTable, t2: BoundaryTable, cfg: ContourConfig, warn=None
) -> SupportResult:
    """Support of the additive convolution from the zeros of g'."""
    return _find_support(t1, t2, cfg, _g_additive_many, _g_additive_deriv_many, warn)


def find_support_multiplicative(
    t1: BoundaryTable, t2: BoundaryTable, cfg: ContourConfig, warn=None
) -> SupportResult:
    """Support of the multiplicative convolution from the zeros of t'."""
    return _find_support(t1, t2, cfg, _t_multiplicative_many, _t_multiplicative_deriv_many, warn)


def _make_image_criterion(fn_many, t1, t2):
    """Sign criterion: w is in the output transform's image iff
    sgn(Im fn(w)) == -sgn(Im w).  Contour failures count as rejection."""

    def criterion(w: np.ndarray) -> bool:
        try:
            vals = fn_many(t1, t2, w)
        except FreeConvError:
            return False
        return bool(np.all(np.sign(vals.imag) == -np.sign(w.imag)))

    return criterion


def find_image_radius(criterion_fn, start_radius: float, cfg: ContourConfig) -> float:
    """Largest circle radius (up to radius_tol) whose sampled points all pass
    the image criterion, found by bisection downward from start_radius."""
    if start_radius <= 0:
        raise InvalidParameterError("start_radius must be positive")
    grid = unit_grid(cfg.criterion_samples).nodes

    def circle_ok(r: float) -> bool:
        w = r * grid
        w = w[np.abs(w.imag) > 1e-9]
        return criterion_fn(w)

    if circle_ok(start_radius):
        r_b = start_radius
    else:
        hi = start_radius
        lo = start_radius / 2.0
        while not circle_ok(lo):
            hi = lo
            lo /= 2.0
            if lo < 1e-4 * start_radius:
                raise ContourTooSmallError(
                    "no circle satisfying the image criterion above 1e-4 of the start radius"
                )
        while hi - lo > cfg.radius_tol:
            mid = 0.5 * (lo + hi)
            if circle_ok(mid):
                lo = mid
            else:
                hi = mid
        r_b = lo
    if not circle_ok(r_b / 2.0):
        raise InvalidContourError("image criterion is not nested: r_b passes but r_b/2 fails")
    return r_b


def choose_inner_radius(gamma_points: np.ndarray, support: SupportInterval, cfg: ContourConfig) -> float:
    """(1 - epsilon) times the largest circle radius inscribed in the
    inverse-Joukowski image of the contour."""
    inner = joukowski_inv(support, np.asarray(gamma_points, dtype=complex), "inner")
    r_c = (1.0 - cfg.epsilon) * float(np.min(np.abs(inner)))
    if not (0.0 < r_c < 1.0):
        raise InvalidContourError(f"inner radius {r_c} outside (0,1)")
    return r_c


def _circle_point_count(r_c: float) -> int:
    # Enough points that r_c**M is negligible next to the kept coefficients.
    m = max(100, math.ceil(16.0 * math.log(10.0) / math.log(1.0 / r_c)))
    return m + (m % 2)


def _convolve(
    mu1: MeasureSpec, mu2: MeasureSpec, cfg: ContourConfig, kind: str, warn: list | None = None
) -> ConvolutionResult:
    warn = [] if warn is None else warn
    table_kind = TransformKind.CAUCHY if kind == "additive" else TransformKind.T_TRANSFORM
    fn_many = _g_additive_many if kind == "additive" else _t_multiplicative_many
    dfn_many = _g_additive_deriv_many if kind == "additive" else _t_multiplicative_deriv_many

    r_a = cfg.resolved_r_a
    t1 = build_boundary_table(mu1, table_kind, r_a, cfg.n_quad)
    t2 = build_boundary_table(mu2, table_kind, r_a, cfg.n_quad)

    sup = _find_support(t1, t2, cfg, fn_many, dfn_many, warn)
    support = SupportInterval(sup.a, sup.b)

    # Upper bounds for the image circle: the largest circle inside both input
    # curves, and the exact real-axis extent (xi_a, xi_b) of the image region
    # found in the support step.  The second bound matters when the critical
    # points lie inside the input curves: a circle reaching past them puts a
    # fold of the inverse transform (an integrand pole) onto the quadrature
    # contour, and sampled sign checks alone can miss the thin failure wedge
    # near the real axis.
    start = (1.0 - cfg.epsilon) * min(
        float(np.min(np.abs(t1.c))),
        float(np.min(np.abs(t2.c))),
        abs(sup.xi_a),
        sup.xi_b,
    )
    criterion = _make_image_criterion(fn_many, t1, t2)
    r_b = find_image_radius(criterion, start, cfg)

    def g_fn(w):
        return fn_many(t1, t2, np.asarray(w, dtype=complex))

    def g_deriv_fn(w):
        return dfn_many(t1, t2, np.asarray(w, dtype=complex))

    contour = ConvolutionContour(g_fn, g_deriv_fn, r_b, GAMMA_POINTS, kind, support)
    r_c = choose_inner_radius(contour.gamma, support, cfg)
    big_m = _circle_point_count(r_c)
    circle = r_c * unit_grid(big_m).nodes
    if kind == "additive":
        values = contour.transform_many(joukowski(support, circle))
    else:
        values = contour.transform_many(circle)

    coeffs = coefficients_from_circle(values, r_c, cfg.m_coeffs, warn)
    grid = density_from_coefficients(coeffs, support, None, kind, warn)

    mass = float(np.trapz(grid[:, 1], grid[:, 0]))
    if abs(mass - 1.0) > 2e-2:
        emit_warning(warn, f"recovered density mass {mass:.4f} deviates from 1 by more than 2e-2")

    return ConvolutionResult(
        support=support,
        xi_a=sup.xi_a,
        xi_b=sup.xi_b,
        r_b=r_b,
        r_c=r_c,
        coefficients=np.asarray(coeffs.g),
        density_grid=grid,
        warnings=tuple(warn),
        kind=kind,
    )


def additive_convolve(mu1: MeasureSpec, mu2: MeasureSpec, cfg: ContourConfig | None = None) -> ConvolutionResult:
    """Free additive convolution of two compactly supported measures."""
    cfg = cfg or ContourConfig()
    warn: list = []
    if not any(m.regularity is RegularityClass.SQRT_BOUNDARY for m in (mu1, mu2)):
        emit_warning(
            warn,
            "neither input has sqrt boundary behavior; the support search and "
            "recovery have no accuracy guarantees",
        )
    return _convolve(mu1, mu2, cfg, "additive", warn)


def multiplicative_convolve(mu1: MeasureSpec, mu2: MeasureSpec, cfg: ContourConfig | None = None) -> ConvolutionResult:
    """Free multiplicative convolution; both measures must live on (0, inf)."""
    cfg = cfg or ContourConfig()
    for i, mu in enumerate((mu1, mu2), start=1):
        if mu.is_atomic:
            if min(p for p, _ in mu.atoms) <= 0.0:
                raise InvalidSupportError(f"measure {i} has atoms at nonpositive locations")
        elif mu.support.a <= 0.0:
            raise InvalidSupportError(
                f"measure {i} has support reaching {mu.support.a} <= 0; "
                "multiplicative convolution needs positive support"
            )
    return _convolve(mu1, mu2, cfg, "multiplicative")
