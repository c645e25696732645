"""Joukowski map machinery: the interval-adapted map, its derivative, the two
inverse branches, roots-of-unity grids, and discrete winding numbers.

Every contour used by the convolution algorithms is an image of a circle
under these maps, so this module is the geometric substrate for the rest of
the package.  All functions accept scalars or numpy arrays of complex values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BranchCutError, InvalidParameterError, PoleError

__all__ = [
    "UnitGrid",
    "unit_grid",
    "joukowski",
    "joukowski_deriv",
    "joukowski_inv",
    "segment_sqrt",
    "segment_distance",
    "winding_number",
    "winding_numbers",
]


@dataclass(frozen=True, eq=False)
class UnitGrid:
    """Equispaced roots of unity exp(2*pi*i*j/n), j = 0..n-1.

    The second half of the grid is stored as the exact complex conjugate of
    the first half, so conjugate symmetries survive downstream arithmetic
    bit for bit.
    """

    n: int
    nodes: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)


def unit_grid(n: int) -> UnitGrid:
    if n < 1:
        raise InvalidParameterError(f"grid size must be positive, got {n}")
    j = np.arange(n)
    nodes = np.exp(2j * np.pi * j / n)
    nodes[0] = 1.0
    if n % 2 == 0:
        nodes[n // 2] = -1.0
    k = np.arange(1, (n + 1) // 2)
    nodes[n - k] = np.conj(nodes[k])
    return UnitGrid(n=n, nodes=nodes)


def _halfwidth_center(support) -> tuple[float, float]:
    # Accepts any object with .a and .b endpoints (SupportInterval or a tuple).
    try:
        a, b = support.a, support.b
    except AttributeError:
        a, b = support
    return 0.25 * (b - a), 0.5 * (a + b)


def joukowski(support, v):
    """Map v to h*(v + 1/v) + c with h = (b-a)/4, c = (a+b)/2.

    Sends the punctured unit disk conformally onto the complement of the
    segment [a, b]; the unit circle is folded onto the segment itself.
    """
    v = np.asarray(v, dtype=complex)
    if np.any(v == 0):
        raise PoleError("Joukowski map has a pole at v = 0")
    h, c = _halfwidth_center(support)
    out = h * (v + 1.0 / v) + c
    return out[()] if out.ndim == 0 else out

def joukowski_deriv(support, v):
    """Derivative h*(1 - 1/v**2) of the interval Joukowski map."""
    v = np.asarray(v, dtype=complex)
    if np.any(v == 0):
        raise PoleError("Joukowski derivative has a pole at v = 0")
    h, _ = _halfwidth_center(support)
    out = h * (1.0 - 1.0 / v**2)
    return out[()] if out.ndim == 0 else out


def segment_sqrt(z, a: float, b: float):
    """sqrt((z-a)*(z-b)) with the branch cut exactly on [a, b].

    Computed as sqrt(z-a)*sqrt(z-b) with principal square roots: the two
    half-line cuts cancel on (-inf, a), leaving a function continuous off
    the segment and asymptotic to +z at infinity.
    """
    z = np.asarray(z, dtype=complex)
    return np.sqrt(z - a) * np.sqrt(z - b)


def segment_distance(z, support) -> np.ndarray:
    """Euclidean distance from z to the real segment [a, b]."""
    z = np.asarray(z, dtype=complex)
    try:
        a, b = support.a, support.b
    except AttributeError:
        a, b = support
    dx = z.real - np.clip(z.real, a, b)
    return np.hypot(dx, z.imag)


def _cut_tolerance(z, support) -> np.ndarray:
    try:
        a, b = support.a, support.b
    except AttributeError:
        a, b = support
    z = np.asarray(z, dtype=complex)
    return 1e-14 * np.maximum(1.0, np.maximum(np.abs(z), b - a))


def joukowski_inv(support, z, branch: str = "inner"):
    """Inverse Joukowski branch: the quadratic root with |v| < 1 (``inner``)
    or |v| > 1 (``outer``).  The two roots multiply to 1.

    Points within ~1e-14 of the segment are rejected: there the roots sit on
    the unit circle and no branch is meaningful.

    The large root is assembled cancellation-free (sign-matched square root),
    the small one as its reciprocal, so both stay accurate near z ~ a, b
    where the naive quadratic formula loses digits.
    """
    if branch not in ("inner", "outer"):
        raise InvalidParameterError(f"unknown branch {branch!r}")
    z = np.asarray(z, dtype=complex)
    if np.any(segment_distance(z, support) <= _cut_tolerance(z, support)):
        raise BranchCutError(
            "inverse Joukowski map is branch-ambiguous on the segment"
        )
    h, c = _halfwidth_center(support)
    u = (z - c) / h  # now solving v + 1/v = u
    s = segment_sqrt(u, -2.0, 2.0)
    # Pick the sign that adds |u| and |s| constructively.
    add = (u.real * s.real + u.imag * s.imag) >= 0
    big = np.where(add, u + s, u - s) / 2.0
    small = 1.0 / big
    swap = np.abs(big) < np.abs(small)
    outer = np.where(swap, small, big)
    inner = np.where(swap, big, small)
    if np.any(np.abs(inner) >= 1.0) or np.any(np.abs(outer) <= 1.0):
        raise BranchCutError("inverse Joukowski roots collapsed onto the unit circle")
    out = inner if branch == "inner" else outer
    return out[()] if out.ndim == 0 else out


def winding_number(curve: np.ndarray, point: complex) -> int:
    """Discrete winding number of a closed sampled curve around ``point``.

    Sums the turning angles between consecutive samples; valid as long as the
    sampling is dense enough that no step turns by more than pi.
    """
    q = np.asarray(curve, dtype=complex) - point
    if np.any(q == 0):
        raise BranchCutError("winding number undefined: point lies on the curve")
    total = np.angle(np.roll(q, -1) / q).sum()
    return int(np.rint(total / (2.0 * np.pi)))


def winding_numbers(curve: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Vectorized :func:`winding_number` over many points."""
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    q = curve[None, :] - pts[:, None]
    if np.any(q == 0):
        raise BranchCutError("winding number undefined: point lies on the curve")
    total = np.angle(np.roll(q, -1, axis=1) / q).sum(axis=1)
    return np.rint(total / (2.0 * np.pi)).astype(int)
