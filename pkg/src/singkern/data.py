"""Cauchy data and their spherical means.

Every datum is callable on points of shape (..., n).  ``spherical_mean``
returns the unnormalized integral of the datum over the sphere of radius r
about X (total weight |S^{n-1}| for the constant function 1).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import special
from scipy.interpolate import RegularGridInterpolator

from .errors import DomainError
from .kernels import sphere_area


class DatumKind(str, Enum):
    GAUSSIAN = "gaussian"
    BUMP = "bump"
    RADIAL_POLY = "radial_poly"
    GRID = "grid"
    SUM = "sum"


def _point(x, n=None):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1 or (n is not None and x.shape[0] != n):
        raise DomainError(f"expected a point of dimension {n}, got shape {x.shape}")
    return x


class InitialDatum:
    kind: DatumKind
    dim: int

    #: closed-form or exact-rule spherical means are available about ``center``
    exact_spherical_mean = False

    def __call__(self, Y):
        raise NotImplementedError

    def sup_abs(self) -> float:
        """Upper bound on |datum|."""
        raise NotImplementedError

    def radial_support(self, X) -> tuple[float, float]:
        """Interval of radii about X outside which the spherical mean vanishes."""
        return 0.0, math.inf

    def radial_features(self, X) -> list[float]:
        """Radii about X where the spherical mean changes quickly (quadrature breakpoints)."""
        return []

    def check_dim(self, n):
        if n != self.dim:
            raise DomainError(f"datum has dimension {self.dim}, problem has n = {n}")


class _Radial(InitialDatum):
    exact_spherical_mean = True
    center: np.ndarray

    def profile(self, rho):
        raise NotImplementedError

    def __call__(self, Y):
        Y = np.asarray(Y, dtype=float)
        rho = np.sqrt(np.sum((Y - self.center) ** 2, axis=-1))
        return self.profile(rho)

    def offset(self, X) -> float:
        return float(np.sqrt(np.sum((_point(X, self.dim) - self.center) ** 2)))


@dataclass(eq=False)
class Gaussian(_Radial):
    """amplitude * exp(-|Y - center|^2 / (2 width^2))"""
    center: np.ndarray
    width: float = 1.0
    amplitude: float = 1.0
    kind = DatumKind.GAUSSIAN

    def __post_init__(self):
        self.center = _point(self.center)
        self.dim = self.center.shape[0]
        if not self.width > 0:
            raise DomainError("Gaussian width must be positive")

    def profile(self, rho):
        return self.amplitude * np.exp(-0.5 * (np.asarray(rho) / self.width) ** 2)

    def sup_abs(self):
        return abs(self.amplitude)

    def radial_features(self, X):
        d = self.offset(X)
        return sorted({max(d + j * self.width, 0.0) for j in (-4, -2, -1, 0, 1, 2, 4)})


@dataclass(eq=False)
class Bump(_Radial):
    """amplitude * exp(1 - 1/(1 - (rho/radius)^2)) for rho < radius, 0 outside."""
    center: np.ndarray
    radius: float = 1.0
    amplitude: float = 1.0
    kind = DatumKind.BUMP

    def __post_init__(self):
        self.center = _point(self.center)
        self.dim = self.center.shape[0]
        if not self.radius > 0:
            raise DomainError("bump radius must be positive")

    def profile(self, rho):
        s = (np.asarray(rho, dtype=float) / self.radius) ** 2
        inside = s < 1
        out = np.zeros_like(s)
        out[inside] = self.amplitude * np.exp(1.0 - 1.0 / (1.0 - s[inside]))
        return out if out.ndim else float(out)

    def sup_abs(self):
        return abs(self.amplitude)

    def radial_support(self, X):
        d = self.offset(X)
        return max(d - self.radius, 0.0), d + self.radius

    def radial_features(self, X):
        d = self.offset(X)
        return sorted({max(d - self.radius, 0.0), d, d + self.radius})


@dataclass(eq=False)
class RadialPoly(_Radial):
    """sum_j coefficients[j] * |Y - center|^{2j}; [1.0] is the constant datum."""
    center: np.ndarray
    coefficients: Sequence[float] = (1.0,)
    kind = DatumKind.RADIAL_POLY

    def __post_init__(self):
        self.center = _point(self.center)
        self.dim = self.center.shape[0]
        self.coefficients = tuple(float(c) for c in self.coefficients)
        if not self.coefficients:
            raise DomainError("RadialPoly needs at least one coefficient")

    def profile(self, rho):
        rho2 = np.asarray(rho, dtype=float) ** 2
        return np.polynomial.polynomial.polyval(rho2, self.coefficients)

    @property
    def degree(self) -> int:
        return 2 * (len(self.coefficients) - 1)

    def sup_abs(self):
        if len(self.coefficients) == 1:
            return abs(self.coefficients[0])
        return math.inf


@dataclass(eq=False)
class GridDatum(InitialDatum):
    """Samples on a tensor grid, interpolated; evaluation outside the grid is an error."""
    axes: tuple
    values: np.ndarray
    method: str = "cubic"
    kind = DatumKind.GRID
    _interp: RegularGridInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        self.axes = tuple(np.asarray(a, dtype=float) for a in self.axes)
        self.values = np.asarray(self.values, dtype=float)
        self.dim = len(self.axes)
        if self.values.shape != tuple(len(a) for a in self.axes):
            raise DomainError("grid values do not match the axes")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("grid values must be finite")
        self._interp = RegularGridInterpolator(self.axes, self.values, method=self.method,
                                               bounds_error=True)

    def __call__(self, Y):
        Y = np.asarray(Y, dtype=float)
        try:
            return self._interp(Y)
        except ValueError as exc:
            raise DomainError(f"grid datum evaluated outside its sample box: {exc}") from None

    def sup_abs(self):
        return float(np.max(np.abs(self.values)))

    @classmethod
    def from_csv(cls, path, method: str = "cubic") -> "GridDatum":
        """Read ``x1,...,xn,value`` rows covering a full tensor grid."""
        with open(Path(path), newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows:
            raise DomainError("empty grid file")
        header = [h.strip() for h in rows[0]]
        n = len(header) - 1
        if n < 1 or header != [f"x{i}" for i in range(1, n + 1)] + ["value"]:
            raise DomainError(f"grid header must be x1,...,xn,value (got {','.join(header)})")
        try:
            data = np.array([[float(v) for v in row] for row in rows[1:] if row], dtype=float)
        except ValueError as exc:
            raise DomainError(f"malformed grid rows: {exc}") from None
        if data.ndim != 2 or data.shape[1] != n + 1:
            raise DomainError("malformed grid rows")
        axes = [np.unique(data[:, i]) for i in range(n)]
        if data.shape[0] != math.prod(len(a) for a in axes):
            raise DomainError("grid rows do not form a full tensor grid")
        idx = tuple(np.searchsorted(axes[i], data[:, i]) for i in range(n))
        values = np.full([len(a) for a in axes], np.nan)
        values[idx] = data[:, n]
        if np.isnan(values).any():
            raise DomainError("grid rows do not form a full tensor grid")
        return cls(tuple(axes), values, method)


@dataclass(eq=False)
class SumDatum(InitialDatum):
    """Linear combination sum_i c_i d_i of data of the same dimension."""
    terms: Sequence[tuple[float, InitialDatum]]
    kind = DatumKind.SUM

    def __post_init__(self):
        self.terms = tuple((float(c), d) for c, d in self.terms)
        dims = {d.dim for _, d in self.terms}
        if len(dims) != 1:
            raise DomainError("all terms need the same dimension")
        self.dim = dims.pop()

    @property
    def exact_spherical_mean(self):
        return all(d.exact_spherical_mean for _, d in self.terms)

    def __call__(self, Y):
        return sum(c * d(Y) for c, d in self.terms)

    def sup_abs(self):
        return sum(abs(c) * d.sup_abs() for c, d in self.terms)

    def radial_support(self, X):
        sup = [d.radial_support(X) for _, d in self.terms]
        return min(s[0] for s in sup), max(s[1] for s in sup)

    def radial_features(self, X):
        return sorted({f for _, d in self.terms for f in d.radial_features(X)})


# ------------------------------------------------------------- sphere rules


@lru_cache(maxsize=64)
def _jacobi_sym(n_nodes: int, e: float):
    x, w = special.roots_jacobi(n_nodes, e, e)
    return x, w


def _sphere_area_lower(n):
    # |S^{n-2}|; for n = 2 the two points of S^0
    return 2.0 * math.pi ** ((n - 1) / 2) / math.gamma((n - 1) / 2)


@lru_cache(maxsize=32)
def sphere_rule(n: int, polar_nodes: int | None = None):
    """Product rule on S^{n-1}: returns (directions (m, n), weights (m,)).

    Weights sum to |S^{n-1}|.  n = 2 is the periodic trapezoid with 128
    points; for n >= 3 each polar angle uses Gauss-Jacobi in cos(theta)
    and the last angle the periodic trapezoid.
    """
    if n == 2:
        m = polar_nodes or 128
        th = 2 * math.pi * np.arange(m) / m
        return np.stack([np.cos(th), np.sin(th)], axis=1), np.full(m, 2 * math.pi / m)
    p = polar_nodes or {3: 24, 4: 14, 5: 10, 6: 8, 7: 6}.get(n, 5)
    dirs = np.ones((1, n))
    wts = np.ones(1)
    # polar angles theta_1..theta_{n-2}; weight sin^{n-1-j}(theta_j)
    for j in range(1, n - 1):
        e = (n - 1 - j - 1) / 2
        mu, w = _jacobi_sym(p, e)
        s = np.sqrt(1 - mu * mu)
        col = j - 1
        new = np.repeat(dirs, p, axis=0)
        new[:, col] *= np.tile(mu, len(dirs))
        new[:, col + 1:] *= np.tile(s, len(dirs))[:, None]
        dirs = new
        wts = np.repeat(wts, p) * np.tile(w, len(wts))
    m = 2 * p
    ph = 2 * math.pi * np.arange(m) / m
    new = np.repeat(dirs, m, axis=0)
    new[:, n - 2] *= np.tile(np.cos(ph), len(dirs))
    new[:, n - 1] *= np.tile(np.sin(ph), len(dirs))
    wts = np.repeat(wts, m) * (2 * math.pi / m)
    return new, wts


def _gaussian_mean(g: Gaussian, n, r, d):
    w2 = g.width ** 2
    beta = r * d / w2
    nu = n / 2 - 1
    if beta < 1e-30:
        return g.amplitude * sphere_area(n) * math.exp(-(r * r + d * d) / (2 * w2))
    if beta < 1e-3:
        # series of beta^{-nu} I_nu(beta) avoids underflow in ive
        s = sum((beta / 2) ** (2 * j) / (math.factorial(j) * math.gamma(nu + j + 1)) for j in range(6))
        core = 2 ** (-nu) * s * math.exp(-(r * r + d * d) / (2 * w2))
    else:
        core = beta ** (-nu) * special.ive(nu, beta) * math.exp(-((r - d) ** 2) / (2 * w2))
    return g.amplitude * (2 * math.pi) ** (n / 2) * core


def _radial_mean_1d(datum: _Radial, n, r, d, nodes):
    """|S^{n-2}| int_{-1}^{1} phi(sqrt(r^2 + d^2 - 2 r d mu)) (1 - mu^2)^{(n-3)/2} dmu."""
    e = (n - 3) / 2
    lo = -1.0
    if isinstance(datum, Bump):
        R = datum.radius
        mu0 = (r * r + d * d - R * R) / (2 * r * d)
        if mu0 >= 1:
            return 0.0
        lo = max(mu0, -1.0)
    if lo == -1.0:
        mu, w = _jacobi_sym(nodes, e)
        rho = np.sqrt(np.maximum(r * r + d * d - 2 * r * d * mu, 0.0))
        return _sphere_area_lower(n) * float(np.dot(w, datum.profile(rho)))
    # support [lo, 1]: Jacobi weight (1 - mu)^e on the cut interval, (1 + mu)^e in the integrand
    x, w = special.roots_jacobi(nodes, e, 0.0)
    half = 0.5 * (1 - lo)
    mu = lo + half * (x + 1)
    rho = np.sqrt(np.maximum(r * r + d * d - 2 * r * d * mu, 0.0))
    vals = datum.profile(rho) * (1 + mu) ** e
    return _sphere_area_lower(n) * half ** (1 + e) * float(np.dot(w, vals))


def spherical_mean(datum: InitialDatum, X, r: float, n: int, quad=None,
                   polar_nodes: int | None = None) -> float:
    """Unnormalized spherical integral of ``datum`` over |Y - X| = r in R^n.

    Radial data use closed forms (Gaussian) or an exact one-dimensional
    reduction; other data use the product rule of :func:`sphere_rule`.
    ``quad`` may carry the node count of the one-dimensional reduction.
    """
    datum.check_dim(n)
    X = _point(X, n)
    if not r >= 0:
        raise DomainError("radius must be >= 0")
    nodes = getattr(quad, "nodes", None) or 48
    if isinstance(datum, SumDatum):
        return sum(c * spherical_mean(d, X, r, n, quad, polar_nodes) for c, d in datum.terms)
    if r == 0:
        return sphere_area(n) * float(datum(X))
    if isinstance(datum, _Radial):
        d = datum.offset(X)
        if d == 0:
            return sphere_area(n) * float(datum.profile(r))
        if isinstance(datum, Gaussian):
            return _gaussian_mean(datum, n, r, d)
        if isinstance(datum, RadialPoly):
            nodes = max(2, datum.degree // 2 + 2)
        return _radial_mean_1d(datum, n, r, d, nodes)
    dirs, w = sphere_rule(n, polar_nodes)
    return float(np.dot(w, datum(X + r * dirs)))
