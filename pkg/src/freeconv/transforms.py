"""Pointwise evaluation of G, G', T, T' for any measure.

Closed forms are used when the measure carries them; otherwise the defining
integral is pushed to the Joukowski angle, where the trapezoidal rule with
halved (vanishing) endpoint terms converges geometrically for sqrt-boundary
densities and algebraically for the rest.  Atomic measures use their exact
rational sums.
"""

from __future__ import annotations

import enum
from functools import lru_cache

import numpy as np

from .conformal import joukowski, segment_distance
from .errors import BranchCutError, InvalidParameterError, OutOfDiskError
from .measures import MeasureSpec, RegularityClass, SupportInterval

__all__ = [
    "TransformKind",
    "default_quadrature_points",
    "joukowski_interval",
    "eval_transform",
    "eval_transform_many",
    "eval_script_transform",
    "verify_exponential_convergence",
]

# Quadrature budgets: sqrt-boundary densities converge geometrically and 400
# points reach machine precision; other regularity classes decay only
# algebraically and get ten times the budget.
_SQRT_POINTS = 400
_SLOW_POINTS = 4000

_CHUNK = 2_000_000  # max kernel-matrix entries per block


class TransformKind(enum.Enum):
    CAUCHY = "G"
    CAUCHY_DERIV = "G'"
    T_TRANSFORM = "T"
    T_TRANSFORM_DERIV = "T'"


def default_quadrature_points(measure: MeasureSpec) -> int:
    # For atomic measures the budget only sizes contour grids (their
    # transforms are exact sums), but those grids need the dense budget too:
    # T-curves race near the poles and sparse sampling degrades both the
    # interior tests and the Cauchy-integral sums.
    if measure.regularity is RegularityClass.SQRT_BOUNDARY:
        return _SQRT_POINTS
    return _SLOW_POINTS


def has_closed_form(measure: MeasureSpec, kind: TransformKind) -> bool:
    """True when :func:`eval_transform` would not use quadrature for this kind."""
    if measure.is_atomic:
        return True
    if kind is TransformKind.CAUCHY:
        return measure.analytic_G is not None
    if kind is TransformKind.CAUCHY_DERIV:
        return measure.analytic_G_deriv is not None
    if kind is TransformKind.T_TRANSFORM:
        return measure.analytic_T is not None or measure.analytic_G is not None
    return measure.analytic_G is not None and measure.analytic_G_deriv is not None


def joukowski_interval(measure: MeasureSpec) -> SupportInterval:
    """Interval to which contours for this measure are adapted.

    For continuous measures this is the support.  Atomic measures admit any
    interval whose interior contains the atoms (their transforms are exact);
    the span is padded by a quarter of its width so the extreme atoms do not
    sit on the interval ends, where they would become singularities on the
    unit circle of the disk coordinate and destroy the contour's analyticity
    margin.
    """
    if not measure.is_atomic:
        return measure.support
    locs = [p for p, _ in measure.atoms]
    lo, hi = min(locs), max(locs)
    pad = 0.25 * (hi - lo) if hi > lo else 1.0
    return SupportInterval(lo - pad, hi + pad)


@lru_cache(maxsize=64)
def _quad_rule(measure: MeasureSpec, n: int):
    """Nodes x_k and weights w_k for the angle-space trapezoidal rule.

    The k = 0 and k = n terms carry sin(0) = sin(pi) = 0 and vanish; the
    halving of the endpoint weights is therefore immaterial but kept literal.
    """
    s = measure.support
    phi = np.pi * np.arange(n + 1) / n
    x = np.clip(s.center + s.halfwidth * np.cos(phi), s.a, s.b)
    w = (np.pi / n) * s.halfwidth * np.sin(phi) * np.asarray(measure.density(x), dtype=float)
    w[0] *= 0.5
    w[-1] *= 0.5
    scale = np.max(np.abs(w)) if n else 1.0
    assert abs(w[0]) <= 1e-12 * max(scale, 1.0) and abs(w[-1]) <= 1e-12 * max(scale, 1.0)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _kernel_sums(x, w, z, kind: TransformKind):
    out = np.empty(z.shape, dtype=complex)
    step = max(1, _CHUNK // (x.size + 1))
    for lo in range(0, z.size, step):
        zz = z[lo : lo + step, None]
        diff = zz - x[None, :]
        if kind is TransformKind.CAUCHY:
            block = (w / diff).sum(axis=1)
        elif kind is TransformKind.CAUCHY_DERIV:
            block = -(w / diff**2).sum(axis=1)
        elif kind is TransformKind.T_TRANSFORM:
            block = ((w * x) / diff).sum(axis=1)
        else:
            block = -((w * x) / diff**2).sum(axis=1)
        out[lo : lo + step] = block
    return out


def _atomic_sums(measure, z, kind: TransformKind):
    locs = np.array([p for p, _ in measure.atoms])
    wts = np.array([w for _, w in measure.atoms])
    diff = z[..., None] - locs
    if kind is TransformKind.CAUCHY:
        return (wts / diff).sum(axis=-1)
    if kind is TransformKind.CAUCHY_DERIV:
        return -(wts / diff**2).sum(axis=-1)
    if kind is TransformKind.T_TRANSFORM:
        return (wts * locs / diff).sum(axis=-1)
    return -(wts * locs / diff**2).sum(axis=-1)


def _closed_form(measure, z, kind: TransformKind):
    """Closed-form value for the kind, or None if unavailable.

    T and T' are derived from G via T = z*G - 1 when not stored explicitly;
    these are exact identities, not approximations.
    """
    if kind is TransformKind.CAUCHY and measure.analytic_G is not None:
        return measure.analytic_G(z)
    if kind is TransformKind.CAUCHY_DERIV and measure.analytic_G_deriv is not None:
        return measure.analytic_G_deriv(z)
    if kind is TransformKind.T_TRANSFORM:
        if measure.analytic_T is not None:
            return measure.analytic_T(z)
        if measure.analytic_G is not None:
            return z * measure.analytic_G(z) - 1.0
    if kind is TransformKind.T_TRANSFORM_DERIV:
        if measure.analytic_G is not None and measure.analytic_G_deriv is not None:
            return measure.analytic_G(z) + z * measure.analytic_G_deriv(z)
    return None


def eval_transform_many(measure: MeasureSpec, kind: TransformKind, z, n: int | None = None):
    """Vectorized :func:`eval_transform` over an array of points."""
    z = np.asarray(z, dtype=complex)
    if measure.is_atomic:
        locs = np.array([p for p, _ in measure.atoms])
        if np.any(np.min(np.abs(z[..., None] - locs), axis=-1) < 1e-14):
            raise BranchCutError("transform evaluated at an atom location")
        return _atomic_sums(measure, z, kind)
    closed = _closed_form(measure, z, kind)
    if closed is not None:
        return np.asarray(closed, dtype=complex)
    if n is None:
        n = default_quadrature_points(measure)
    if n < 2:
        raise InvalidParameterError(f"quadrature needs at least 2 points, got {n}")
    if np.any(segment_distance(z, measure.support) < 1e-13):
        raise BranchCutError("transform evaluated on the support cut")
    x, w = _quad_rule(measure, n)
    flat = z.reshape(-1)
    return _kernel_sums(x, w, flat, kind).reshape(z.shape)


def eval_transform(measure: MeasureSpec, kind: TransformKind, z: complex, n: int | None = None) -> complex:
    """G, G', T or T' of ``measure`` at the point z off the support."""
    return complex(eval_transform_many(measure, kind, np.asarray(z, dtype=complex), n))


def eval_script_transform(
    measure: MeasureSpec, kind: TransformKind, v: complex, n: int | None = None
):
    """Disk-coordinate transform: the kind evaluated at the Joukowski image of v."""
    if kind not in (TransformKind.CAUCHY, TransformKind.T_TRANSFORM):
        raise InvalidParameterError("script transforms are defined for G and T only")
    varr = np.asarray(v, dtype=complex)
    if np.any(np.abs(varr) >= 1.0):
        raise OutOfDiskError("script transform argument must lie inside the unit disk")
    z = joukowski(joukowski_interval(measure), varr)
    out = eval_transform_many(measure, kind, z, n)
    return complex(out) if np.ndim(v) == 0 else out


def verify_exponential_convergence(measure: MeasureSpec, z: complex, n_list) -> list:
    """Quadrature error against the best reference value, per budget in n_list.

    The reference is the closed form when the measure has one, otherwise a
    quadrature evaluation at four times the largest requested budget.  Used
    by tests and the CLI convergence study, not by the algorithms.
    """
    bare = measure.without_closed_forms()
    ref = _closed_form(measure, np.asarray(z, dtype=complex), TransformKind.CAUCHY)
    if ref is None:
        ref = eval_transform(bare, TransformKind.CAUCHY, z, 4 * max(n_list))
    ref = complex(ref)
    return [
        (n, abs(eval_transform(bare, TransformKind.CAUCHY, z, n) - ref))
        for n in n_list
    ]
