"""Random-matrix validation of computed convolutions.

Samples matrix ensembles whose limiting spectra are the input measures,
combines them with Haar-random eigenvectors (the matrix model of free
independence), and compares the empirical spectrum against a computed
density through the Kolmogorov-Smirnov distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .measures import MeasureSpec

__all__ = [
    "EmpiricalSpectrum",
    "sample_matrix_spectrum",
    "free_combine_spectra",
    "ks_distance",
]


@dataclass(frozen=True, eq=False)
class EmpiricalSpectrum:
    """Sorted eigenvalue sample of one random-matrix realization."""

    n: int
    eigenvalues: np.ndarray
    seed: int

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)

    def mean(self) -> float:
        return float(self.eigenvalues.mean())


def _haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    # QR of a Gaussian matrix is Haar only after fixing the signs of R's
    # diagonal; without the correction the distribution is biased.
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def _quantiles(measure: MeasureSpec, n: int) -> np.ndarray:
    """Deterministic inverse-CDF sample at levels k/(n+1), k = 1..n."""
    q = np.arange(1, n + 1) / (n + 1)
    if measure.is_atomic:
        locs = np.array([p for p, _ in measure.atoms])
        cumw = np.cumsum([w for _, w in measure.atoms])
        return locs[np.searchsorted(cumw, q, side="left")]
    if measure.family == "uniform":
        a, b = measure.params
        return a + (b - a) * q
    s = measure.support
    grid = np.linspace(s.a, s.b, 20001)
    pdf = np.asarray(measure.density(grid), dtype=float)
    cdf = np.concatenate(([0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * np.diff(grid))))
    cdf /= cdf[-1]
    return np.interp(q, cdf, grid)


def sample_matrix_spectrum(measure: MeasureSpec, n: int, seed: int) -> EmpiricalSpectrum:
    """Eigenvalues of one n x n realization of a matrix model for ``measure``.

    Semicircle measures use a symmetric Gaussian matrix, Marchenko-Pastur a
    Wishart-type product; everything else becomes a diagonal matrix of
    deterministic quantiles (the randomness that matters downstream is the
    Haar conjugation in :func:`free_combine_spectra`).
    """
    if n < 2:
        raise InvalidParameterError(f"matrix size must be at least 2, got {n}")
    rng = np.random.default_rng(seed)
    if measure.family == "semicircle":
        center, radius = measure.params
        a = rng.standard_normal((n, n))
        sym = (a + a.T) / np.sqrt(2.0 * n)
        eig = center + 0.5 * radius * np.linalg.eigvalsh(sym)
    elif measure.family == "marchenko_pastur":
        (lam,) = measure.params
        cols = int(round(n / lam))
        z = rng.standard_normal((n, cols))
        eig = np.linalg.eigvalsh(z @ z.T / cols)
    else:
        eig = np.sort(_quantiles(measure, n))
    return EmpiricalSpectrum(n=n, eigenvalues=np.sort(eig), seed=seed)


def free_combine_spectra(
    a: EmpiricalSpectrum, b: EmpiricalSpectrum, op: str, seed: int
) -> EmpiricalSpectrum:
    """Spectrum of D_a + Q D_b Q^T (add) or D_a^{1/2} Q D_b Q^T D_a^{1/2} (mul)
    with Q Haar-orthogonal."""
    if op not in ("add", "mul"):
        raise InvalidParameterError(f"unknown combination op {op!r}")
    if a.n != b.n:
        raise InvalidParameterError(f"size mismatch: {a.n} vs {b.n}")
    da = a.eigenvalues
    db = b.eigenvalues
    if op == "add" and not np.any(db):
        # Q * 0 * Q^T vanishes identically; the sum is D_a itself.
        return EmpiricalSpectrum(n=a.n, eigenvalues=np.sort(da), seed=seed)
    if op == "mul" and (np.any(da <= 0) or np.any(db <= 0)):
        raise InvalidParameterError("multiplicative combination needs positive spectra")
    rng = np.random.default_rng(seed)
    q = _haar_orthogonal(a.n, rng)
    rotated = (q * db) @ q.T
    if op == "add":
        mat = np.diag(da) + rotated
    else:
        root = np.sqrt(da)
        mat = rotated * np.outer(root, root)
    return EmpiricalSpectrum(n=a.n, eigenvalues=np.sort(np.linalg.eigvalsh(mat)), seed=seed)


def _grid_cdf(xs: np.ndarray, fs: np.ndarray):
    cdf = np.concatenate(([0.0], np.cumsum(0.5 * (fs[1:] + fs[:-1]) * np.diff(xs))))
    return cdf / cdf[-1]


def ks_distance(spectrum: EmpiricalSpectrum, result) -> float:
    """Sup distance between the empirical CDF and the CDF of a density grid.

    ``result`` may be a ConvolutionResult or a plain (n, 2) array of
    (x, density) rows; the grid CDF is renormalized to total mass 1 and held
    constant outside its range.
    """
    grid = getattr(result, "density_grid", result)
    grid = np.asarray(grid, dtype=float)
    xs, fs = grid[:, 0], grid[:, 1]
    cdf = _grid_cdf(xs, fs)
    eig = spectrum.eigenvalues
    at = np.interp(eig, xs, cdf, left=0.0, right=1.0)
    n = eig.size
    upper = np.max(np.arange(1, n + 1) / n - at)
    lower = np.max(at - np.arange(0, n) / n)
    return float(max(upper, lower))
