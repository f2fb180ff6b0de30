"""Singular value amplification: polynomial construction and degree search.

The target of uniform singular value amplification by a factor ``gamma`` is
``gamma * x`` on ``[0, (1-delta)/gamma]`` while the polynomial stays bounded
by 1 on all of [-1, 1].  The construction multiplies ``gamma * x`` by a
smooth rectangle built from error functions, truncates its Chebyshev
expansion, and binary-searches the smallest degree passing a grid check.
Applying the polynomial to a block's singular values (via SVD) realises the
amplification at desk scale; synthesising the corresponding phase factors is
deliberately out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, log, sqrt

import numpy as np
from scipy.fft import dct
from scipy.special import erf as _erf

from ._kernels import chebyshev_values
from .errors import InfeasibleParameters, SingularValueOutOfRange

#: largest possible plateau margin: 1 - 2^(-1/4)
DELTA_DEFAULT = 1.0 - 2.0 ** (-0.25)

#: hard ceiling for the degree search
MAX_DEGREE = 1 << 16

#: steepness of the erf rectangle, kappa = KAPPA_SCALE * (gamma/delta) * sqrt(ln(4/eps)).
#: 3.0 calibrates the fitted degree prefactor to ~3.0 * (gamma/delta) ln(gamma/eps)
#: over gamma in [2,32], delta in [0.08, 0.159], eps in [1e-4, 1e-2]; the minimal
#: steepness meeting the erf bounds (scale 2.0) measures ~2.3 instead.
KAPPA_SCALE = 3.0


@dataclass(frozen=True)
class RectangleApprox:
    """Smooth rectangle ``(erf(k(x+x0)) - erf(k(x-x0))) / 2``.

    Plateau covers ``[-(1-delta)/gamma, (1-delta)/gamma]`` at height within
    eps/2 of 1; decays below eps/2 outside ``[-x0-w, x0+w]`` with
    ``x0 = (1-delta/2)/gamma`` and ``w = delta/(2 gamma)``.
    """

    gamma: float
    delta: float
    epsilon: float
    kappa: float
    x0: float

    def __call__(self, x):
        return 0.5 * (_erf(self.kappa * (x + self.x0)) - _erf(self.kappa * (x - self.x0)))


def rect_approx(gamma: float, delta: float, epsilon: float) -> RectangleApprox:
    if not gamma > 1:
        raise InfeasibleParameters(f"amplification factor must exceed 1, got {gamma}")
    if not 0 < delta < 0.5 or not 0 < epsilon < 0.5:
        raise InfeasibleParameters(f"need 0 < delta, epsilon < 1/2, got {delta}, {epsilon}")
    kappa = KAPPA_SCALE * (gamma / delta) * sqrt(log(4.0 / epsilon))
    x0 = (1.0 - delta / 2.0) / gamma
    f = RectangleApprox(gamma, delta, epsilon, kappa, x0)
    w = delta / (2.0 * gamma)
    plateau_edge = (1.0 - delta) / gamma
    if f(plateau_edge) < 1.0 - epsilon / 2.0 or f(x0 + w) > epsilon / 2.0:
        raise InfeasibleParameters(
            f"no erf steepness meets both bounds for gamma={gamma}, delta={delta}, epsilon={epsilon}"
        )
    return f


@dataclass(frozen=True)
class ChebyshevPoly:
    """Odd Chebyshev-basis polynomial with the parameters it was built for."""

    coefficients: np.ndarray
    degree: int
    gamma: float
    delta: float
    epsilon: float

    def __call__(self, x):
        scalar = np.isscalar(x)
        out = chebyshev_values(self.coefficients, np.atleast_1d(np.asarray(x, dtype=np.float64)))
        return float(out[0]) if scalar else out


def _chebyshev_interpolate(func, degree: int) -> np.ndarray:
    """Chebyshev coefficients of the interpolant at first-kind nodes (via DCT)."""
    npts = degree + 1
    theta = np.pi * (2.0 * np.arange(npts) + 1.0) / (2.0 * npts)
    vals = np.asarray(func(np.cos(theta)), dtype=np.float64)
    coeffs = dct(vals, type=2) / npts
    coeffs[0] *= 0.5
    return coeffs


def chebyshev_truncate(f, degree: int, gamma: float | None = None) -> ChebyshevPoly:
    """Odd polynomial ``gamma * x * F(x)`` with F the Chebyshev interpolant of f.

    F is interpolated at ``degree`` first-kind nodes with its odd coefficients
    zeroed (f is even); the multiplication by x happens exactly on the
    coefficients, so the result has exact odd parity.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    if gamma is None:
        gamma = getattr(f, "gamma", 1.0)
    a = _chebyshev_interpolate(f, degree - 1)
    a[1::2] = 0.0
    p = np.zeros(degree + 1, dtype=np.float64)
    p[1] += a[0]
    if a.size > 1:
        k = np.arange(1, a.size)
        np.add.at(p, k + 1, 0.5 * a[k])
        np.add.at(p, k - 1, 0.5 * a[k])
    p *= gamma
    p[0::2] = 0.0
    return ChebyshevPoly(
        p,
        degree,
        gamma,
        getattr(f, "delta", float("nan")),
        getattr(f, "epsilon", float("nan")),
    )


def check_grid(gamma: float, delta: float, refine: int = 1) -> np.ndarray:
    """The accuracy-check grid: ceil(1000 gamma/(1-delta)) points spanning [-1, 1]."""
    npts = ceil(1000.0 * gamma / (1.0 - delta)) * refine
    return np.linspace(-1.0, 1.0, npts)


def grid_check(poly: ChebyshevPoly, grid: np.ndarray, gamma: float, delta: float, epsilon: float) -> bool:
    """|P| <= 1 everywhere (tolerance 1e-9) and eps-relative accuracy on (0, (1-delta)/gamma].

    The polynomial is exactly odd (coefficient structure), so evaluating the
    non-negative half of the symmetric grid covers both conditions.
    """
    half = grid[grid >= 0]
    vals = chebyshev_values(poly.coefficients, half)
    if np.abs(vals).max() > 1.0 + 1e-9:
        return False
    plateau = (half > 0) & (half <= (1.0 - delta) / gamma * (1.0 + 1e-12))
    z = half[plateau]
    rel = np.abs(vals[plateau] - gamma * z) / (gamma * z)
    return bool(rel.max() <= epsilon)


def min_degree(gamma: float, delta: float, epsilon: float, max_degree: int = MAX_DEGREE) -> int:
    """Smallest (odd) degree whose truncation passes the grid check.

    Binary search over odd degrees on the standard grid, then a short upward
    walk until the polynomial also passes a 10x denser grid: the coarse grid
    can undersample the truncation ripple peaks by a few percent, and the
    returned polynomial is required to stand up to denser verification.
    """
    f = rect_approx(gamma, delta, epsilon)
    grid = check_grid(gamma, delta)
    dense = check_grid(gamma, delta, refine=10)

    def ok(degree: int, g: np.ndarray) -> bool:
        return grid_check(chebyshev_truncate(f, degree), g, gamma, delta, epsilon)

    guess = int(3.0 * (gamma / delta) * log(gamma / epsilon)) | 1
    hi = min(max(guess, 3), max_degree) | 1
    while not ok(hi, grid):
        if hi >= max_degree:
            raise InfeasibleParameters(
                f"no degree up to {max_degree} meets the bounds for "
                f"gamma={gamma}, delta={delta}, epsilon={epsilon}"
            )
        hi = min(2 * hi + 1, max_degree) | 1
    lo = 1  # degree 1 is gamma*x*F and never passes for gamma > 1
    # invariant: ok(hi), not ok(lo)
    while hi - lo > 2:
        mid = ((lo + hi) // 2) | 1
        if ok(mid, grid):
            hi = mid
        else:
            lo = mid
    degree = hi
    while not ok(degree, dense):
        degree += 2
        if degree > max_degree:
            raise InfeasibleParameters("dense-grid verification exhausted the degree budget")
    return degree


def sva_polynomial(gamma: float, delta: float, epsilon: float, max_degree: int = MAX_DEGREE) -> ChebyshevPoly:
    """Convenience: the truncation at the searched minimal degree."""
    d = min_degree(gamma, delta, epsilon, max_degree)
    return chebyshev_truncate(rect_approx(gamma, delta, epsilon), d)


def amplify_singular_values(block: np.ndarray, poly: ChebyshevPoly) -> np.ndarray:
    """Map the singular values of ``block`` through the polynomial.

    Requires every singular value inside the validity region
    ``[0, (1-delta)/gamma]``; each nonzero amplified value then satisfies
    ``|poly(z)/(gamma z) - 1| <= eps`` (with a small sampling slack).
    """
    b = np.asarray(block, dtype=np.float64)
    u, s, vt = np.linalg.svd(b, full_matrices=False)
    limit = (1.0 - poly.delta) / poly.gamma
    if s.size and s.max() > limit * (1.0 + 1e-9):
        raise SingularValueOutOfRange(f"largest singular value {s.max():.6g} exceeds {limit:.6g}")
    s_new = poly(np.clip(s, 0.0, limit))
    nz = s > 1e-14
    if np.any(nz):
        rel = np.abs(s_new[nz] / (poly.gamma * s[nz]) - 1.0)
        assert rel.max() <= poly.epsilon * 1.25 + 1e-12, "amplified values missed the accuracy contract"
    return (u * s_new) @ vt


@dataclass(frozen=True)
class SweepPoint:
    gamma: float
    delta: float
    epsilon: float
    degree: int


@dataclass(frozen=True)
class PrefactorFit:
    """Least-squares fit of degree = c * (gamma/delta) * ln(gamma/eps)."""

    c: float
    n_points: int
    residuals: np.ndarray
    predicted: np.ndarray
    low_confidence: bool

    @property
    def max_relative_residual(self) -> float:
        return float(np.abs(self.residuals / self.predicted).max())


@dataclass(frozen=True)
class DegreeSweepResult:
    points: tuple[SweepPoint, ...]
    fit: PrefactorFit
    polys: tuple[ChebyshevPoly, ...] = field(repr=False, default=())


def fit_prefactor(points) -> PrefactorFit:
    """Fit the degree model through the origin; flags fits on few points."""
    pts = list(points)
    x = np.array([(p.gamma / p.delta) * log(p.gamma / p.epsilon) for p in pts])
    y = np.array([float(p.degree) for p in pts])
    c = float(np.dot(x, y) / np.dot(x, x))
    predicted = c * x
    return PrefactorFit(c, len(pts), y - predicted, predicted, low_confidence=len(pts) < 12)


def degree_sweep(gammas, deltas, epsilons, max_degree: int = MAX_DEGREE) -> DegreeSweepResult:
    """Run min_degree over the parameter product and fit the prefactor."""
    points = []
    polys = []
    for g in gammas:
        for d in deltas:
            for e in epsilons:
                deg = min_degree(g, d, e, max_degree)
                points.append(SweepPoint(g, d, e, deg))
                polys.append(chebyshev_truncate(rect_approx(g, d, e), deg))
    return DegreeSweepResult(tuple(points), fit_prefactor(points), tuple(polys))
