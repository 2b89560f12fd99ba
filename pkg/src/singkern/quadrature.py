"""One-dimensional quadrature with singular-endpoint support.

For the weighted schemes the callable is the integrand divided by the weight:

* gauss_jacobi on [a, b]: weight (z - a)^alpha (b - z)^beta
* gauss_laguerre on [a, inf): weight (z - a)^alpha e^{-(z - a)}

Error estimates compare the rule with itself at doubled node count.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .errors import ConvergenceError, DomainError


class Scheme(str, Enum):
    GAUSS_LEGENDRE = "gauss_legendre"
    GAUSS_JACOBI = "gauss_jacobi"
    GAUSS_LAGUERRE = "gauss_laguerre"
    ADAPTIVE = "adaptive_subdivision"


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: Scheme = Scheme.GAUSS_LEGENDRE
    nodes: int = 64
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    alpha: float = 0.0
    beta: float = 0.0
    abs_tol: float = 0.0
    vectorized: bool = False
    # extra node doublings allowed before giving up (Gauss schemes)
    max_doublings: int = 3

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.nodes < 2:
            raise DomainError("nodes must be >= 2")
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if self.alpha <= -1 or self.beta <= -1:
            raise DomainError("endpoint exponents must exceed -1")

    def with_(self, **kw) -> "QuadratureSpec":
        d = {f: getattr(self, f) for f in self.__dataclass_fields__}
        d.update(kw)
        return QuadratureSpec(**d)


@lru_cache(maxsize=128)
def _rule(scheme: Scheme, n: int, alpha: float, beta: float):
    if scheme is Scheme.GAUSS_LEGENDRE:
        x, w = special.roots_legendre(n)
    elif scheme is Scheme.GAUSS_JACOBI:
        # scipy weight (1-x)^p (1+x)^q: p sits at the right end
        x, w = special.roots_jacobi(n, beta, alpha)
    elif scheme is Scheme.GAUSS_LAGUERRE:
        # large n overflows inside scipy; the finiteness check below reports it
        with np.errstate(all="ignore"), warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            x, w = special.roots_genlaguerre(n, alpha)
    else:
        raise ValueError(scheme)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))):
        raise DomainError(f"{scheme.value} rule with {n} nodes is not representable in float64")
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _evaluate(f, z, vectorized):
    if vectorized:
        return np.asarray(f(z), dtype=float)
    return np.array([f(float(v)) for v in z])


def _gauss(f, a, b, n, spec: QuadratureSpec):
    x, w = _rule(spec.scheme, n, spec.alpha, spec.beta)
    if spec.scheme is Scheme.GAUSS_LAGUERRE:
        z = a + x
        scale = 1.0
    else:
        half = 0.5 * (b - a)
        z = a + half * (x + 1.0)
        if spec.scheme is Scheme.GAUSS_LEGENDRE:
            scale = half
        else:
            scale = half ** (1.0 + spec.alpha + spec.beta)
    vals = _evaluate(f, z, spec.vectorized)
    if not np.all(np.isfinite(vals)):
        raise DomainError("integrand is not finite at a quadrature node")
    return scale * float(np.dot(w, vals))


def integrate_1d(f, interval, spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """Integrate ``f`` over ``interval = (a, b)``; returns ``(value, est_error)``.

    Gauss schemes double the node count until two successive rules agree to
    ``rel_tol`` (at most ``max_doublings`` times); the returned estimate is
    the difference of the last two rules.  ``adaptive_subdivision`` wraps
    QUADPACK and accepts infinite limits.
    """
    spec = spec or QuadratureSpec()
    a, b = map(float, interval)
    if spec.scheme is Scheme.GAUSS_LAGUERRE:
        if not math.isinf(b) or b < 0:
            raise DomainError("gauss_laguerre integrates over [a, inf)")
    elif spec.scheme is not Scheme.ADAPTIVE:
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"{spec.scheme.value} needs a finite interval")
    if a == b:
        return 0.0, 0.0

    if spec.scheme is Scheme.ADAPTIVE:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err, info, *rest = integrate.quad(
                f, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                limit=spec.max_subdivisions, full_output=1)
        if rest:
            raise ConvergenceError(f"adaptive quadrature failed: {rest[0]}", partial=val)
        return float(val), float(err)

    val, err, _ = _gauss_doubling(f, a, b, spec)
    return val, err


def _gauss_doubling(f, a, b, spec):
    n = spec.nodes
    prev = _gauss(f, a, b, n, spec)
    for _ in range(spec.max_doublings + 1):
        n *= 2
        cur = _gauss(f, a, b, n, spec)
        err = abs(cur - prev)
        if err <= max(spec.rel_tol * abs(cur), spec.abs_tol):
            return cur, err, n
        prev = cur
    raise ConvergenceError(f"{spec.scheme.value}: tolerance {spec.rel_tol} not met "
                           f"with {n} nodes (last difference {err:.3g})", partial=cur)


def gauss_converged(f, interval, spec: QuadratureSpec):
    """Like :func:`integrate_1d` for Gauss schemes, also returning the node count used."""
    a, b = map(float, interval)
    return _gauss_doubling(f, a, b, spec)


def gauss_fixed(f, interval, spec: QuadratureSpec, nodes: int) -> float:
    """A single Gauss rule with exactly ``nodes`` nodes (no error estimate)."""
    a, b = map(float, interval)
    return _gauss(f, a, b, nodes, spec)
