"""Measure data model and the built-in measure zoo.

A :class:`MeasureSpec` bundles a compactly supported probability measure with
whatever closed-form transforms are known for it.  The built-ins (semicircle,
Marchenko-Pastur, uniform, atomic) carry exact Cauchy/T-transforms; custom
densities fall back to quadrature everywhere.

Closed forms use the segment-branch square root / logarithm so they are
analytic off the support and decay like 1/z at infinity.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .conformal import segment_sqrt
from .errors import InvalidMeasureError, InvalidParameterError

__all__ = [
    "RegularityClass",
    "SupportInterval",
    "MeasureSpec",
    "make_semicircle",
    "make_marchenko_pastur",
    "make_uniform",
    "make_atomic",
    "make_custom",
    "moment",
    "parse_measure_spec",
]


class RegularityClass(enum.Enum):
    """Boundary behavior of the density; selects the default quadrature budget."""

    SQRT_BOUNDARY = "sqrt"
    JACOBI = "jacobi"
    ATOMIC = "atomic"
    OTHER = "other"


@dataclass(frozen=True)
class SupportInterval:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a < self.b):
            raise InvalidParameterError(
                f"support requires a < b, got [{self.a}, {self.b}]"
            )

    @property
    def center(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def halfwidth(self) -> float:
        return 0.5 * (self.b - self.a)

    @property
    def width(self) -> float:
        return self.b - self.a


@dataclass(frozen=True, eq=False)
class MeasureSpec:
    """A compactly supported probability measure.

    ``density`` maps x to f(x) >= 0 on the support (vectorized); atomic
    measures have ``atoms`` instead.  The ``analytic_*`` slots hold optional
    closed forms; the quadrature path is used for anything absent.
    ``family``/``params`` tag the construction for the random-matrix models.
    """

    support: Optional[SupportInterval]
    regularity: RegularityClass
    density: Optional[Callable] = None
    atoms: Optional[tuple] = None
    analytic_G: Optional[Callable] = None
    analytic_G_deriv: Optional[Callable] = None
    analytic_G_inv: Optional[Callable] = None
    analytic_T: Optional[Callable] = None
    analytic_T_inv: Optional[Callable] = None
    family: str = "custom"
    params: tuple = ()

    @property
    def is_atomic(self) -> bool:
        return self.atoms is not None

    def without_closed_forms(self) -> "MeasureSpec":
        """Copy with all analytic transforms dropped (forces quadrature).

        Atomic measures keep their exact rational transforms; there is no
        quadrature route for them.
        """
        return replace(
            self,
            analytic_G=None,
            analytic_G_deriv=None,
            analytic_G_inv=None,
            analytic_T=None,
            analytic_T_inv=None,
        )


def _check_density(density, support: SupportInterval) -> None:
    # Sample on a Chebyshev-style grid; negative values invalidate the measure.
    phi = np.linspace(0.0, np.pi, 2049)
    x = support.center + support.halfwidth * np.cos(phi)
    vals = np.asarray(density(x), dtype=float)
    if np.any(vals < -1e-12) or not np.all(np.isfinite(vals)):
        raise InvalidMeasureError("density must be finite and nonnegative on the support")


def _density_mass(density, support: SupportInterval, n: int) -> float:
    # Trapezoid in the angle variable after x = c + h*cos(phi).
    phi = np.linspace(0.0, np.pi, n + 1)
    x = np.clip(support.center + support.halfwidth * np.cos(phi), support.a, support.b)
    integrand = support.halfwidth * np.sin(phi) * np.asarray(density(x), dtype=float)
    return float(np.trapz(integrand, phi))


def make_semicircle(center: float = 0.0, radius: float = 2.0) -> MeasureSpec:
    """Semicircle law on [center - radius, center + radius].

    Carries exact G, G', G^-1 and T = z*G - 1; the shifted/scaled forms are
    the standard ones conjugated by the affine change of variable.
    """
    if not radius > 0:
        raise InvalidParameterError(f"semicircle radius must be positive, got {radius}")
    c, r = float(center), float(radius)
    support = SupportInterval(c - r, c + r)

    def density(x):
        x = np.asarray(x, dtype=float)
        return (2.0 / (np.pi * r * r)) * np.sqrt(np.maximum(r * r - (x - c) ** 2, 0.0))

    def g_std(u):
        return 0.5 * (u - segment_sqrt(u, -2.0, 2.0))

    def G(z):
        z = np.asarray(z, dtype=complex)
        return (2.0 / r) * g_std(2.0 * (z - c) / r)

    def G_deriv(z):
        z = np.asarray(z, dtype=complex)
        u = 2.0 * (z - c) / r
        g = g_std(u)
        return (4.0 / (r * r)) * g / (2.0 * g - u)

    def G_inv(w):
        w = np.asarray(w, dtype=complex)
        return c + 0.25 * r * r * w + 1.0 / w

    def T(z):
        z = np.asarray(z, dtype=complex)
        return z * G(z) - 1.0

    return MeasureSpec(
        support=support,
        regularity=RegularityClass.SQRT_BOUNDARY,
        density=density,
        analytic_G=G,
        analytic_G_deriv=G_deriv,
        analytic_G_inv=G_inv,
        analytic_T=T,
        family="semicircle",
        params=(c, r),
    )


def make_marchenko_pastur(lam: float) -> MeasureSpec:
    """Marchenko-Pastur law with ratio parameter lam in (0, 1)."""
    if not (0.0 < lam < 1.0):
        raise InvalidParameterError(f"Marchenko-Pastur parameter must be in (0,1), got {lam}")
    lam = float(lam)
    lo = (1.0 - math.sqrt(lam)) ** 2
    hi = (1.0 + math.sqrt(lam)) ** 2
    support = SupportInterval(lo, hi)

    def density(x):
        x = np.asarray(x, dtype=float)
        return np.sqrt(np.maximum((hi - x) * (x - lo), 0.0)) / (2.0 * np.pi * lam * x)

    def G(z):
        z = np.asarray(z, dtype=complex)
        return (z + lam - 1.0 - segment_sqrt(z, lo, hi)) / (2.0 * lam * z)

    def G_deriv(z):
        # Implicit differentiation of lam*z*G^2 - (z + lam - 1)*G + 1 = 0.
        z = np.asarray(z, dtype=complex)
        g = G(z)
        return (g - lam * g * g) / (2.0 * lam * z * g - z - lam + 1.0)

    def G_inv(w):
        w = np.asarray(w, dtype=complex)
        return 1.0 / (1.0 - lam * w) + 1.0 / w

    def T(z):
        z = np.asarray(z, dtype=complex)
        return z * G(z) - 1.0

    return MeasureSpec(
        support=support,
        regularity=RegularityClass.SQRT_BOUNDARY,
        density=density,
        analytic_G=G,
        analytic_G_deriv=G_deriv,
        analytic_G_inv=G_inv,
        analytic_T=T,
        family="marchenko_pastur",
        params=(lam,),
    )


def make_uniform(a: float, b: float) -> MeasureSpec:
    """Uniform law on [a, b]; a Jacobi measure without sqrt boundary decay."""
    if not (a < b):
        raise InvalidParameterError(f"uniform requires a < b, got [{a}, {b}]")
    a, b = float(a), float(b)
    support = SupportInterval(a, b)
    h = 0.5 * (b - a)
    c = 0.5 * (a + b)

    def density(x):
        x = np.asarray(x, dtype=float)
        return np.full_like(x, 1.0 / (b - a))

    def G(z):
        # log((z-a)/(z-b)): the Moebius ratio maps the segment onto the
        # negative reals, so the principal log is cut exactly on [a, b].
        z = np.asarray(z, dtype=complex)
        return np.log((z - a) / (z - b)) / (b - a)

    def G_deriv(z):
        z = np.asarray(z, dtype=complex)
        return -1.0 / ((z - a) * (z - b))

    def G_inv(w):
        w = np.asarray(w, dtype=complex)
        return c - h + 2.0 * h / (1.0 - np.exp(-2.0 * h * w))

    def T(z):
        z = np.asarray(z, dtype=complex)
        return z * G(z) - 1.0

    return MeasureSpec(
        support=support,
        regularity=RegularityClass.OTHER,
        density=density,
        analytic_G=G,
        analytic_G_deriv=G_deriv,
        analytic_G_inv=G_inv,
        analytic_T=T,
        family="uniform",
        params=(a, b),
    )


def make_atomic(atoms: Sequence[tuple]) -> MeasureSpec:
    """Purely atomic measure with exact rational G and T transforms."""
    pts = sorted((float(p), float(w)) for p, w in atoms)
    locs = np.array([p for p, _ in pts])
    wts = np.array([w for _, w in pts])
    if len(np.unique(locs)) != len(locs):
        raise InvalidParameterError("atom locations must be distinct")
    if np.any(wts <= 0):
        raise InvalidParameterError("atom weights must be positive")
    if abs(wts.sum() - 1.0) > 1e-12:
        raise InvalidParameterError(f"atom weights must sum to 1, got {wts.sum()!r}")

    def G(z):
        z = np.asarray(z, dtype=complex)
        return (wts / (z[..., None] - locs)).sum(axis=-1)

    def G_deriv(z):
        z = np.asarray(z, dtype=complex)
        return -(wts / (z[..., None] - locs) ** 2).sum(axis=-1)

    def T(z):
        z = np.asarray(z, dtype=complex)
        return (wts * locs / (z[..., None] - locs)).sum(axis=-1)

    return MeasureSpec(
        support=None,
        regularity=RegularityClass.ATOMIC,
        atoms=tuple(pts),
        analytic_G=G,
        analytic_G_deriv=G_deriv,
        analytic_T=T,
        family="atomic",
        params=tuple(pts),
    )


def make_custom(
    density: Callable,
    support: SupportInterval,
    regularity: RegularityClass,
) -> MeasureSpec:
    """Wrap a user density; all transforms are computed by quadrature.

    The density must integrate to 1 within 1e-6; the check refines the
    quadrature until two budgets agree.
    """
    if regularity is RegularityClass.ATOMIC:
        raise InvalidParameterError("use make_atomic for atomic measures")
    _check_density(density, support)
    mass = _density_mass(density, support, 4096)
    mass_fine = _density_mass(density, support, 8192)
    if abs(mass_fine - mass) > 1e-7 or abs(mass_fine - 1.0) > 1e-6:
        raise InvalidMeasureError(
            f"density mass is {mass_fine!r}, not 1 within 1e-6"
        )
    return MeasureSpec(
        support=support,
        regularity=regularity,
        density=density,
        family="custom",
        params=(),
    )


def moment(measure: MeasureSpec, k: int) -> float:
    """k-th raw moment, by exact summation for atoms and trapezoidal
    quadrature in the Joukowski angle otherwise."""
    if k < 0:
        raise InvalidParameterError(f"moment order must be nonnegative, got {k}")
    if measure.is_atomic:
        return float(sum(w * p**k for p, w in measure.atoms))
    s = measure.support
    n = 2048 if measure.regularity is RegularityClass.SQRT_BOUNDARY else 32768
    phi = np.linspace(0.0, np.pi, n + 1)
    x = np.clip(s.center + s.halfwidth * np.cos(phi), s.a, s.b)
    integrand = s.halfwidth * np.sin(phi) * np.asarray(measure.density(x), dtype=float) * x**k
    return float(np.trapz(integrand, phi))


# ---------------------------------------------------------------------------
# Measure mini-language:  semicircle[:center,radius] | mp:lambda |
# uniform:a,b | atomic:p1@w1,p2@w2,... | json:<path>
# ---------------------------------------------------------------------------

def _measure_from_json(path: str) -> MeasureSpec:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if "atoms" in data:
        return make_atomic([tuple(pair) for pair in data["atoms"]])
    family = data.get("family")
    if family == "semicircle":
        return make_semicircle(*data.get("params", ()))
    if family in ("mp", "marchenko_pastur"):
        return make_marchenko_pastur(*data["params"])
    if family == "uniform":
        return make_uniform(*data["params"])
    if "poly_coeffs" in data:
        a, b = data["support"]
        coeffs = list(map(float, data["poly_coeffs"]))
        reg = RegularityClass(data.get("regularity", "other"))

        def density(x, _c=coeffs):
            return np.polyval(_c[::-1], np.asarray(x, dtype=float))

        return make_custom(density, SupportInterval(a, b), reg)
    raise InvalidParameterError(f"cannot build a measure from JSON file {path!r}")


def parse_measure_spec(text: str) -> MeasureSpec:
    """Parse the CLI measure mini-language into a MeasureSpec."""
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    try:
        if name == "semicircle":
            if not arg:
                return make_semicircle()
            center, radius = (float(t) for t in arg.split(","))
            return make_semicircle(center, radius)
        if name == "mp":
            return make_marchenko_pastur(float(arg))
        if name == "uniform":
            a, b = (float(t) for t in arg.split(","))
            return make_uniform(a, b)
        if name == "atomic":
            pairs = []
            for item in arg.split(","):
                loc, _, weight = item.partition("@")
                pairs.append((float(loc), float(weight)))
            return make_atomic(pairs)
        if name == "json":
            return _measure_from_json(arg)
    except InvalidParameterError:
        raise
    except (ValueError, OSError) as exc:
        raise InvalidParameterError(f"malformed measure spec {text!r}: {exc}") from exc
    raise InvalidParameterError(f"unknown measure family {name!r}")
