"""Cauchy-problem solvers built on radial reductions of the kernel integrals.

heat:       u(t, X) = int H(t, |X-Y|) f(Y) dY
wave, odd:  w(t, X) = C_n t int_0^1 F((1+k)/2, 1-k/2; (n+1)/2; 1-u^2) g#(t u) u du
wave, n=2:  w(t, X) = c_2 t M(t^2)
wave, even: w(t, X) = K_n t D^m[x^m M(x)] at x = t^2, m = (n-2)/2
with M(x) = 1/2 int_0^1 (1-z)^{-1/2} F((1-k)/2, k/2; 1/2; 1-z) g#(sqrt(x z)) dz
and g# the spherical integral of the datum about X.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import integrate, special

from . import specfun as sf
from .data import InitialDatum, _point, sphere_rule, spherical_mean
from .errors import ConvergenceError, DomainError
from .kernels import (DEFAULT_NORMS, KernelQuery, NormalizationTable, UncertifiedRangeWarning,
                      heat_kernel, sphere_area)
from .quadrature import QuadratureSpec, Scheme, gauss_converged, gauss_fixed, integrate_1d


class Problem(str, Enum):
    HEAT = "heat"
    WAVE = "wave"


@dataclass
class SolveRequest:
    problem: Problem
    n: int
    k: float
    t: float
    X: np.ndarray
    datum: InitialDatum
    quad: QuadratureSpec | None = None
    cross_check: bool = False
    norms: NormalizationTable | None = None

    def __post_init__(self):
        self.problem = Problem(self.problem)
        if int(self.n) != self.n or not 2 <= self.n <= 8:
            raise DomainError(f"n must be an integer in [2, 8] (got {self.n})")
        if not (self.t > 0 and math.isfinite(self.t)):
            raise DomainError(f"t must be positive (got {self.t})")
        self.X = _point(self.X, self.n)
        self.datum.check_dim(self.n)


@dataclass
class SolveDiagnostics:
    nodes: int
    branch: str
    steps: list = field(default_factory=list)
    cross_check: float | None = None


@dataclass
class SolveResult:
    value: float
    est_error: float
    diagnostics: SolveDiagnostics


# ------------------------------------------------------------------ heat

HEAT_ZMAX = 60.0


def solve_heat(req: SolveRequest) -> SolveResult:
    """u = Gamma(k+1)/(2 pi^{n/2}) int_0^inf e^{-z} U(k, n/2, z) z^{n/2-1} f#(sqrt(4 t z)) dz.

    Default quadrature is adaptive on [0, 60] with breakpoints at the datum's
    features plus a bound on the tail; gauss_laguerre is also accepted.
    """
    if req.problem is not Problem.HEAT:
        raise DomainError("solve_heat needs a heat request")
    n, k, t, X, f = req.n, req.k, req.t, req.X, req.datum
    if not k > 0:
        raise DomainError(f"heat solver needs k > 0 (got {k})")
    quad = req.quad or QuadratureSpec(Scheme.ADAPTIVE, rel_tol=1e-12, abs_tol=1e-15, max_subdivisions=400)
    norms = req.norms or DEFAULT_NORMS
    c = n / 2

    def weighted(z):
        # e^{-z} U z^{c-1}, regular at z = 0 up to a log for n = 2
        if z == 0:
            z = 1e-300
        return sf.hypU(k, c, z) * z ** (c - 1)

    def fsharp(z):
        return spherical_mean(f, X, math.sqrt(4 * t * z), n)

    pref = norms.heat(k) / (2 * math.pi ** c)
    if quad.scheme is Scheme.GAUSS_LAGUERRE:
        # the rule carries z^alpha e^{-z}; the callable holds the rest of z^{c-1}
        val, err = integrate_1d(lambda z: sf.hypU(k, c, z) * z ** (c - 1 - quad.alpha) * fsharp(z),
                                (0.0, math.inf), quad)
        nodes, branch = quad.nodes, "gauss_laguerre"
    elif quad.scheme is Scheme.ADAPTIVE:
        feats = sorted({r * r / (4 * t) for r in f.radial_features(X)} - {0.0})
        pts = [p for p in feats if 0 < p < HEAT_ZMAX] or None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err, info, *msg = integrate.quad(
                lambda z: math.exp(-z) * weighted(z) * fsharp(z), 0.0, HEAT_ZMAX,
                epsabs=quad.abs_tol, epsrel=quad.rel_tol, limit=quad.max_subdivisions,
                points=pts, full_output=1)
        if msg:
            raise ConvergenceError(f"heat quadrature failed: {msg[0]}", partial=pref * val)
        # tail: U(k,c,z) <= z^{-k} for z >= 1 and c >= 1, so |tail| <= sup|f| omega int e^{-z} z^{c-1-k}
        tail = sphere_area(n) * f.sup_abs() * special.gammaincc(max(c - k, 1e-12), HEAT_ZMAX) \
            * math.gamma(max(c - k, 1e-12))
        err = err + tail
        nodes, branch = info["neval"], "adaptive"
    else:
        raise DomainError(f"heat solver does not use {quad.scheme.value}")
    result = SolveResult(pref * val, abs(pref) * err, SolveDiagnostics(nodes, branch))
    if req.cross_check:
        result.diagnostics.cross_check = heat_cross_check(req)
    return result


def heat_cross_check(req: SolveRequest) -> float:
    """Direct integral of H(t, |X-Y|) f(Y) over R^n in polar coordinates about X.

    Uses the kernel evaluator and the generic sphere rule, so it shares
    neither the z-substitution nor the closed-form spherical means with
    :func:`solve_heat`.  Only offered for n <= 3.
    """
    n, k, t, X, f = req.n, req.k, req.t, req.X, req.datum
    if n > 3:
        raise DomainError("full-space cross-check is offered for n <= 3")
    dirs, w = sphere_rule(n, 48 if n == 3 else 256)
    rmax = math.sqrt(4 * t * HEAT_ZMAX)

    def integrand(r):
        if r == 0:
            return 0.0
        H = heat_kernel(KernelQuery(n, k, t, r))
        return H * r ** (n - 1) * float(np.dot(w, f(X + r * dirs)))

    feats = [r for r in f.radial_features(X) if 0 < r < rmax] or None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(integrand, 0.0, rmax, epsabs=1e-14, epsrel=1e-11,
                                limit=400, points=feats)
    return val


# ------------------------------------------------------------------ wave


def _wave_checks(req: SolveRequest):
    if req.problem is not Problem.WAVE:
        raise DomainError("wave solver needs a wave request")
    if not 0 < req.k < 1:
        warnings.warn(f"wave solvers are certified for 0 < k < 1 (got {req.k})",
                      UncertifiedRangeWarning, stacklevel=3)


def _default_wave_quad(req):
    return req.quad or QuadratureSpec(Scheme.GAUSS_LEGENDRE, nodes=32, rel_tol=1e-12,
                                      abs_tol=1e-15, max_doublings=4)


def _u_window(req, rmax):
    """Range of u = r / rmax where the spherical integral can be nonzero."""
    lo, hi = req.datum.radial_support(req.X)
    return min(lo / rmax, 1.0), min(hi / rmax, 1.0)


def solve_wave_odd(req: SolveRequest) -> SolveResult:
    """Odd n: C_n t int_0^1 F((1+k)/2, 1-k/2; (n+1)/2; 1-u^2) g#(t u) u du by Gauss-Legendre."""
    _wave_checks(req)
    n, k, t = req.n, req.k, req.t
    if n % 2 != 1:
        raise DomainError(f"solve_wave_odd needs odd n (got {n})")
    norms = req.norms or DEFAULT_NORMS
    quad = _default_wave_quad(req)
    u0, u1 = _u_window(req, t)
    if u0 >= u1:
        return SolveResult(0.0, 0.0, SolveDiagnostics(0, "outside_support"))
    a, b, c = (1 + k) / 2, 1 - k / 2, (n + 1) / 2

    def integrand(u):
        return sf.hyp2f1(a, b, c, 1 - u * u) * spherical_mean(req.datum, req.X, t * u, n) * u

    val, err = integrate_1d(integrand, (u0, u1), quad.with_(scheme=Scheme.GAUSS_LEGENDRE))
    C = norms.odd(n, k)
    return SolveResult(C * t * val, abs(C * t) * err, SolveDiagnostics(quad.nodes, "odd_reduced"))


class _EvenInner:
    """M(x) = 1/2 int_0^1 (1-z)^{-1/2} F((1-k)/2, k/2; 1/2; 1-z) g#(sqrt(x z)) dz.

    With z = u^4 the log singularity of F at z = 0 becomes u^3 log u and
    the (1 - u)^{-1/2} factor goes into a Gauss-Jacobi weight.  The node
    count is frozen after the first call so that M is a smooth function of
    x, which the even-n finite differences rely on.
    """

    def __init__(self, req: SolveRequest, quad: QuadratureSpec):
        self.req, self.quad = req, quad
        self.nodes = None
        self.a, self.b = (1 - req.k) / 2, req.k / 2
        self.log_coef = sf.gamma_ratio([0.5], [self.a, self.b]) if self.b > 0 else 0.0
        self.log_shift = 2 * sf.digamma(1.0) - sf.digamma(self.a) - sf.digamma(self.b) if self.b > 0 else 0.0

    def _integrand(self, x):
        req = self.req

        def h(u):
            u2 = u * u
            z = u2 * u2
            if z > 1e-13 or self.b == 0:
                F = sf.hyp2f1(self.a, self.b, 0.5, 1 - z)
            elif z > 0:
                # c = a + b: logarithmic leading term, error O(z log z)
                F = self.log_coef * (self.log_shift - math.log(z))
            else:
                F = 0.0
            # 4 u^3 dz-Jacobian over sqrt((1+u)(1+u^2)), the rest of (1-z)^{-1/2}
            jac = 4 * u2 * u / math.sqrt((1 + u) * (1 + u2))
            return jac * F * spherical_mean(req.datum, req.X, math.sqrt(x) * u2, req.n)
        return h

    def __call__(self, x):
        lo, hi = self.req.datum.radial_support(self.req.X)
        rmax = math.sqrt(x)
        u0 = math.sqrt(min(lo / rmax, 1.0))
        u1 = math.sqrt(min(hi / rmax, 1.0))
        if u0 >= u1:
            return 0.0, 0.0
        h = self._integrand(x)
        if u1 == 1.0:
            spec = self.quad.with_(scheme=Scheme.GAUSS_JACOBI, alpha=0.0, beta=-0.5)
            f = h
        else:
            spec = self.quad.with_(scheme=Scheme.GAUSS_LEGENDRE)

            def f(u):
                return h(u) / math.sqrt(1 - u)
        if self.nodes is None:
            val, err, self.nodes = gauss_converged(f, (u0, u1), spec)
            return 0.5 * val, 0.5 * err
        return 0.5 * gauss_fixed(f, (u0, u1), spec, self.nodes), 0.0


def solve_wave_2d(req: SolveRequest) -> SolveResult:
    """n = 2: c_2 (t/2) int_0^1 (1-z)^{-1/2} F((1-k)/2, k/2; 1/2; 1-z) g#(t sqrt z) dz."""
    _wave_checks(req)
    if req.n != 2:
        raise DomainError("solve_wave_2d needs n = 2")
    norms = req.norms or DEFAULT_NORMS
    inner = _EvenInner(req, _default_wave_quad(req))
    M, err = inner(req.t * req.t)
    c2 = norms.c2(req.k)
    return SolveResult(c2 * req.t * M, abs(c2 * req.t) * err,
                       SolveDiagnostics(inner.nodes or 0, "n2_reduced"))


# relative x-steps for the m-th derivative; larger m needs wider steps
EVEN_STEP = {1: 1e-3, 2: 3e-3, 3: 1e-2}


def _dm_stencil(P, x, h, m):
    if m == 1:
        return (P(x + h) - P(x - h)) / (2 * h)
    if m == 2:
        return (P(x + h) - 2 * P(x) + P(x - h)) / (h * h)
    if m == 3:
        return (P(x + 2 * h) - 2 * P(x + h) + 2 * P(x - h) - P(x - 2 * h)) / (2 * h ** 3)
    raise DomainError(f"derivative order {m} not supported")


def solve_wave_even(req: SolveRequest) -> SolveResult:
    """Even n >= 4: K_n t D^m[x^m M(x)] at x = t^2, m = (n-2)/2.

    This is the operator chain (x d/dx + a), a = 1/2, ..., (n-3)/2, applied
    to sqrt(x) M(x).  D^m is a centered difference with one Richardson
    level; its error estimate is the Richardson correction.
    """
    _wave_checks(req)
    n, k, t = req.n, req.k, req.t
    if n % 2 or n < 4:
        raise DomainError(f"solve_wave_even needs even n >= 4 (got {n})")
    norms = req.norms or DEFAULT_NORMS
    lo, _ = req.datum.radial_support(req.X)
    if lo >= t:
        return SolveResult(0.0, 0.0, SolveDiagnostics(0, "outside_support"))
    m = (n - 2) // 2
    x = t * t
    inner = _EvenInner(req, _default_wave_quad(req))
    M0, qerr = inner(x)
    cache = {}

    def P(xx):
        if xx not in cache:
            cache[xx] = xx ** m * inner(xx)[0]
        return cache[xx]

    h = EVEN_STEP[m] * x
    d1 = _dm_stencil(P, x, h, m)
    d2 = _dm_stencil(P, x, h / 2, m)
    D = (4 * d2 - d1) / 3
    # roundoff of M amplified by the stencil
    noise = 8 * sf._EPS * max(abs(v) for v in cache.values()) / (h / 2) ** m
    K = norms.even_solver(n, k)
    err = abs(K * t) * (abs(d2 - d1) / 3 + noise + math.factorial(m) * x ** m * qerr)
    return SolveResult(K * t * D, err,
                       SolveDiagnostics(inner.nodes or 0, "even_operator_chain", [h, h / 2]))


def solve(req: SolveRequest) -> SolveResult:
    if req.problem is Problem.HEAT:
        return solve_heat(req)
    if req.n == 2:
        return solve_wave_2d(req)
    if req.n % 2:
        return solve_wave_odd(req)
    return solve_wave_even(req)
