"""Cauchy-integral evaluations on boundary tables.

Step 1 of both convolution algorithms precomputes transform values c_j and
derivative values d_j on the Joukowski image of a circle of radius r_A < 1.
Everything downstream (R- and S-transforms, the inverse-transform functions
g and t with their derivatives, and the convolution's transform on interior
points) is a trapezoidal discretization of a Cauchy integral over curves
derived from those tables.

Sign conventions: all sums follow the derivation with the contour
parametrized counterclockwise in the disk coordinate, giving denominators
(c_j - w); the semicircle R(w) = w identity pins the overall sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conformal import (
    joukowski,
    joukowski_deriv,
    joukowski_inv,
    unit_grid,
    winding_number,
    winding_numbers,
)
from .errors import (
    DegenerateDerivativeError,
    InvalidContourError,
    InvalidParameterError,
    OutsideContourError,
    PoleError,
)
from .measures import MeasureSpec, SupportInterval
from .transforms import (
    TransformKind,
    default_quadrature_points,
    eval_transform_many,
    has_closed_form,
    joukowski_interval,
)

__all__ = [
    "BoundaryTable",
    "build_boundary_table",
    "r_transform",
    "g_additive",
    "g_additive_deriv",
    "s_transform",
    "t_inverse",
    "t_multiplicative",
    "t_multiplicative_deriv",
    "ConvolutionContour",
    "convolution_transform_on_point",
]

# Refuse Cauchy-integral evaluation closer to the discretized contour than
# this fraction of the curve diameter; the error bound degrades like the
# inverse square of that distance.
DISTANCE_FRACTION = 1e-3


@dataclass(frozen=True, eq=False)
class BoundaryTable:
    """Transform data on the curve {(G or T)(J(r_a * xi_n^j))}, j = 0..n-1.

    c and d hold the transform and its derivative, jv and jp the Joukowski
    map values and derivatives, all at the radius-r_a grid points.
    """

    measure: MeasureSpec
    support: SupportInterval
    kind: TransformKind
    r_a: float
    n: int
    c: np.ndarray
    d: np.ndarray
    jv: np.ndarray
    jp: np.ndarray
    nodes: np.ndarray
    exact: bool = False

    def __post_init__(self):
        for arr in (self.c, self.d, self.jv, self.jp, self.nodes):
            arr.setflags(write=False)

    @property
    def curve_diameter(self) -> float:
        span_re = self.c.real.max() - self.c.real.min()
        span_im = self.c.imag.max() - self.c.imag.min()
        return float(np.hypot(span_re, span_im))

    @property
    def deriv_kind(self) -> TransformKind:
        return (
            TransformKind.CAUCHY_DERIV
            if self.kind is TransformKind.CAUCHY
            else TransformKind.T_TRANSFORM_DERIV
        )


def build_boundary_table(
    measure: MeasureSpec,
    kind: TransformKind,
    r_a: float = 0.95,
    n: int | None = None,
) -> BoundaryTable:
    """Precompute c_j, d_j, J(r_a xi^j), J'(r_a xi^j) for one measure.

    The image curve must wind exactly once around the origin: the transform
    fixes 0 and maps the disk holomorphically, so anything else signals a
    measure outside the working assumptions.
    """
    if not (0.0 < r_a < 1.0):
        raise InvalidParameterError(f"r_a must be in (0,1), got {r_a}")
    if kind not in (TransformKind.CAUCHY, TransformKind.T_TRANSFORM):
        raise InvalidParameterError("boundary tables hold G or T values")
    if n is None:
        n = default_quadrature_points(measure)
    if n < 16:
        raise InvalidParameterError(f"need at least 16 contour points, got {n}")
    support = joukowski_interval(measure)
    grid = unit_grid(n)
    v = r_a * grid.nodes
    jv = joukowski(support, v)
    jp = joukowski_deriv(support, v)
    deriv = (
        TransformKind.CAUCHY_DERIV
        if kind is TransformKind.CAUCHY
        else TransformKind.T_TRANSFORM_DERIV
    )
    c = eval_transform_many(measure, kind, jv, n)
    d = eval_transform_many(measure, deriv, jv, n)
    table = BoundaryTable(
        measure=measure,
        support=support,
        kind=kind,
        r_a=float(r_a),
        n=n,
        c=c,
        d=d,
        jv=jv,
        jp=jp,
        nodes=grid.nodes,
        exact=has_closed_form(measure, kind) and has_closed_form(measure, deriv),
    )
    w0 = winding_number(c, 0.0)
    if w0 != 1:
        raise InvalidContourError(
            f"transform image curve winds {w0} times around 0, expected 1"
        )
    return table


def _require_inside(table: BoundaryTable, w: np.ndarray) -> None:
    dist = np.abs(table.c[None, :] - w[:, None])
    j_min = np.argmin(dist, axis=1)
    m2 = dist[np.arange(w.size), j_min]
    # The quadrature pole sits roughly m2/|local speed| from the unit circle,
    # so closeness is judged against the local sample spacing of the curve;
    # four spacings keep the trapezoidal term near 1e-11 at any n.
    spacing = 0.5 * np.abs(table.c[(j_min + 1) % table.n] - table.c[j_min - 1])
    if np.any(m2 < 4.0 * spacing):
        raise OutsideContourError("point too close to the boundary curve")
    # Tables built by quadrature carry entrywise error that the Cauchy kernel
    # amplifies like 1/m2**2; keep a global margin for those.
    if not table.exact and np.any(m2 < DISTANCE_FRACTION * table.curve_diameter):
        raise OutsideContourError("point too close to the boundary curve")
    if np.any(winding_numbers(table.c, w) != 1):
        raise OutsideContourError("point outside the transform image curve")


def _r_transform_many(table: BoundaryTable, w: np.ndarray) -> np.ndarray:
    _require_inside(table, w)
    num = table.nodes * table.d * table.jp * (table.jv - 1.0 / table.c)
    return (table.r_a / table.n) * (num[None, :] / (table.c[None, :] - w[:, None])).sum(axis=1)


def r_transform(table: BoundaryTable, w: complex) -> complex:
    """R-transform via the Cauchy integral over the table's curve.

    Satisfies R(w) = G^{-1}(w) - 1/w for w strictly inside the curve {c_j}.
    """
    if table.kind is not TransformKind.CAUCHY:
        raise InvalidParameterError("r_transform needs a Cauchy-kind table")
    return complex(_r_transform_many(table, np.atleast_1d(np.asarray(w, dtype=complex))))


def _g_additive_many(t1: BoundaryTable, t2: BoundaryTable, w: np.ndarray) -> np.ndarray:
    return _r_transform_many(t1, w) + _r_transform_many(t2, w) + 1.0 / w


def g_additive(t1: BoundaryTable, t2: BoundaryTable, w: complex) -> complex:
    """g(w) = G_1^{-1}(w) + G_2^{-1}(w) - 1/w, the inverse Cauchy transform
    of the additive convolution near 0."""
    if w == 0:
        raise PoleError("g has a pole at w = 0")
    return complex(_g_additive_many(t1, t2, np.atleast_1d(np.asarray(w, dtype=complex))))


def _g_additive_deriv_many(t1: BoundaryTable, t2: BoundaryTable, w: np.ndarray) -> np.ndarray:
    total = 1.0 / w**2
    for table in (t1, t2):
        pre = _r_transform_many(table, w) + 1.0 / w  # G_k^{-1}(w)
        gp = eval_transform_many(table.measure, TransformKind.CAUCHY_DERIV, pre, table.n)
        if np.any(np.abs(gp) < 1e-13):
            raise DegenerateDerivativeError("G' vanishes at a computed preimage")
        total = total + 1.0 / gp
    return total


def g_additive_deriv(t1: BoundaryTable, t2: BoundaryTable, w: complex) -> complex:
    """g'(w) = 1/G_1'(G_1^{-1}(w)) + 1/G_2'(G_2^{-1}(w)) + 1/w**2."""
    if w == 0:
        raise PoleError("g' has a pole at w = 0")
    return complex(_g_additive_deriv_many(t1, t2, np.atleast_1d(np.asarray(w, dtype=complex))))


def _s_transform_many(table: BoundaryTable, w: np.ndarray) -> np.ndarray:
    if np.any(w == 0) or np.any(w == -1):
        raise PoleError("S-transform has poles at w = 0 and w = -1")
    _require_inside(table, w)
    num = table.nodes * table.d * table.jp * (1.0 + table.c) / (table.c * table.jv)
    return (table.r_a / table.n) * (num[None, :] / (table.c[None, :] - w[:, None])).sum(axis=1)


def s_transform(table: BoundaryTable, w: complex) -> complex:
    """S-transform via the Cauchy integral over the table's T-curve."""
    if table.kind is not TransformKind.T_TRANSFORM:
        raise InvalidParameterError("s_transform needs a T-kind table")
    return complex(_s_transform_many(table, np.atleast_1d(np.asarray(w, dtype=complex))))


def _t_inverse_many(table: BoundaryTable, w: np.ndarray) -> np.ndarray:
    return (1.0 + w) / (w * _s_transform_many(table, w))


def t_inverse(table: BoundaryTable, w: complex) -> complex:
    """T^{-1}(w) = (1 + w) / (w * S(w))."""
    return complex(_t_inverse_many(table, np.atleast_1d(np.asarray(w, dtype=complex))))


def _t_multiplicative_many(t1: BoundaryTable, t2: BoundaryTable, w: np.ndarray) -> np.ndarray:
    return (w / (1.0 + w)) * _t_inverse_many(t1, w) * _t_inverse_many(t2, w)


def t_multiplicative(t1: BoundaryTable, t2: BoundaryTable, w: complex) -> complex:
    """t(w) = w/(1+w) * T_1^{-1}(w) * T_2^{-1}(w), the inverse T-transform of
    the multiplicative convolution near 0."""
    if w == 0 or w == -1:
        raise PoleError("t has poles at w = 0 and w = -1")
    return complex(_t_multiplicative_many(t1, t2, np.atleast_1d(np.asarray(w, dtype=complex))))


def _t_multiplicative_deriv_many(
    t1: BoundaryTable, t2: BoundaryTable, w: np.ndarray
) -> np.ndarray:
    inv1 = _t_inverse_many(t1, w)
    inv2 = _t_inverse_many(t2, w)
    dinvs = []
    for table, inv in ((t1, inv1), (t2, inv2)):
        tp = eval_transform_many(table.measure, TransformKind.T_TRANSFORM_DERIV, inv, table.n)
        if np.any(np.abs(tp) < 1e-13):
            raise DegenerateDerivativeError("T' vanishes at a computed preimage")
        dinvs.append(1.0 / tp)
    frac = w / (1.0 + w)
    return (
        inv1 * inv2 / (1.0 + w) ** 2
        + frac * (dinvs[0] * inv2 + inv1 * dinvs[1])
    )


def t_multiplicative_deriv(t1: BoundaryTable, t2: BoundaryTable, w: complex) -> complex:
    """Derivative of t by the product rule, with (T_k^{-1})' = 1/T_k'(T_k^{-1})."""
    if w == 0 or w == -1:
        raise PoleError("t' has poles at w = 0 and w = -1")
    return complex(
        _t_multiplicative_deriv_many(t1, t2, np.atleast_1d(np.asarray(w, dtype=complex)))
    )


class ConvolutionContour:
    """Trapezoidal Cauchy-integral evaluator for the convolution's transform.

    For the additive kind the curve is Gamma = {g(r_b xi^j)} and
    ``transform(z)`` returns G_mu(z) for z in the component of infinity of
    the complement of Gamma (where the integrand has exactly one pole).  For
    the multiplicative kind the curve is pulled into the disk by the inverse
    Joukowski map of the output support and ``transform(v)`` returns
    T_mu(J(v)) for v inside that curve.
    """

    def __init__(
        self,
        g_fn,
        g_deriv_fn,
        r_b: float,
        n: int,
        kind: str = "additive",
        support: SupportInterval | None = None,
    ):
        if kind not in ("additive", "multiplicative"):
            raise InvalidParameterError(f"unknown convolution kind {kind!r}")
        if not r_b > 0:
            raise InvalidParameterError(f"r_b must be positive, got {r_b}")
        self.kind = kind
        self.r_b = float(r_b)
        self.n = int(n)
        grid = unit_grid(self.n)
        self.nodes = grid.nodes
        w = self.r_b * grid.nodes
        self.gamma = np.asarray(g_fn(w), dtype=complex)
        self.dgamma = np.asarray(g_deriv_fn(w), dtype=complex)
        self.support = support
        if kind == "multiplicative":
            if support is None:
                raise InvalidParameterError(
                    "multiplicative contour needs the output support interval"
                )
            self.jinv = joukowski_inv(support, self.gamma, "inner")
            self.jinv_deriv = 1.0 / joukowski_deriv(support, self.jinv)
        else:
            # Natural parametrization runs clockwise around the enclosed
            # segment (the curve is the image of a circle under a map with a
            # simple pole); assert it so sign errors surface here.
            centroid = complex(self.gamma.mean())
            if winding_number(self.gamma, centroid) != -1:
                raise InvalidContourError("additive contour has unexpected orientation")
            self.jinv = joukowski_inv(support, self.gamma, "inner") if support else None
        if self.jinv is not None and winding_number(self.jinv, 0.0) != 1:
            # The pulled-back curve must enclose the origin counterclockwise.
            raise InvalidContourError(
                "inverse-Joukowski image of the contour does not wind once around 0"
            )
        # Interior and closeness checks run in the disk coordinate whenever
        # the support is known: the Joukowski map compresses distances near
        # the segment, so z-plane proximity to the contour says nothing
        # about the quadrature pole location that actually controls error.
        check_curve = self.jinv if self.jinv is not None else self.gamma
        diag = np.hypot(
            check_curve.real.max() - check_curve.real.min(),
            check_curve.imag.max() - check_curve.imag.min(),
        )
        self._check_curve = check_curve
        self._min_dist = DISTANCE_FRACTION * float(diag)
        self._inside_winding = 1 if self.jinv is not None else 0

    def _check_points(self, z: np.ndarray) -> None:
        if self.kind == "additive" and self.jinv is not None:
            pts = joukowski_inv(self.support, z, "inner")
        else:
            pts = z
        m2 = np.min(np.abs(self._check_curve[None, :] - pts[:, None]), axis=1)
        if np.any(m2 < self._min_dist):
            raise OutsideContourError("evaluation point too close to the contour")
        if np.any(winding_numbers(self._check_curve, pts) != self._inside_winding):
            raise OutsideContourError(
                "evaluation point outside the contour's validity region"
            )

    def transform_many(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        self._check_points(z)
        xi2 = self.nodes**2
        if self.kind == "additive":
            num = xi2 * self.dgamma
            denom_base = self.gamma
        else:
            num = xi2 * self.jinv_deriv * self.dgamma
            denom_base = self.jinv
        kernel = num[None, :] / (denom_base[None, :] - z[:, None])
        return (self.r_b**2 / self.n) * kernel.sum(axis=1)

    def transform(self, z: complex) -> complex:
        return complex(self.transform_many(z))


def convolution_transform_on_point(
    g_fn,
    g_deriv_fn,
    r_b: float,
    n: int,
    z: complex,
    kind: str = "additive",
    support: SupportInterval | None = None,
) -> complex:
    """One-shot wrapper around :class:`ConvolutionContour`.

    Rebuilds the discretized contour on every call; pipelines should hold a
    ConvolutionContour instead.
    """
    return ConvolutionContour(g_fn, g_deriv_fn, r_b, n, kind, support).transform(z)
