"""Independent checks: finite-difference PDE residuals, limits, recursions and
special-function identities.

Residual stencils are second-order centered differences evaluated on a
ladder h, h/2, h/4, h/8.  The estimated order is log2 of the ratio of the
last two residuals.  A ladder passes when it decreases strictly, reaches
the order and final-rung thresholds, and its signed h -> 0 extrapolation
is below the residual threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from . import kernels as kn
from . import specfun as sf
from .data import Gaussian, InitialDatum
from .errors import DomainError, LightConeError
from .solvers import Problem, SolveRequest, solve


@dataclass(frozen=True)
class Thresholds:
    """Pass/fail thresholds used by :func:`run_suite`."""
    residual: float = 1e-5          # final rung, relative to |field| at the point
    order: float = 1.9
    mass: float = 1e-8
    closed_wave: float = 1e-6
    closed_heat: float = 1e-8
    ic: float = 1e-3
    limit_ratio: float = 0.5
    limit_ratio_tol: float = 0.1
    recursion: float = 1e-6
    identity: float = 1e-6


THRESHOLDS = Thresholds()


# ------------------------------------------------------------- residuals


class Operator(str, Enum):
    SINGULAR_HEAT = "singular_heat"
    CLASSICAL_HEAT = "classical_heat"
    SINGULAR_WAVE = "singular_wave"


@dataclass
class ResidualReport:
    operator: Operator
    point: tuple
    steps: list
    residuals: list
    scale: float            # |field(point)|
    est_order: float
    valid: bool = True
    term_scale: float = math.nan
    extrapolated: float = math.nan  # |(4 R(h_last) - R(h_prev)) / 3| over the term scale, signed R

    @property
    def final(self) -> float:
        """Final-rung residual relative to the size of the operator's terms.

        The terms are |time part| plus the per-axis second differences in
        absolute value, all at the final rung.  Without a term scale the
        residual is taken relative to |field(point)|.
        """
        s = self.term_scale if self.term_scale == self.term_scale else self.scale
        return self.residuals[-1] / s if s else self.residuals[-1]

    @property
    def monotone(self) -> bool:
        return all(b < a for a, b in zip(self.residuals, self.residuals[1:]))

    def passed(self, th: Thresholds = THRESHOLDS) -> bool:
        # a wrong field leaves a residual floor that the h -> 0 extrapolation exposes
        extra_ok = not self.extrapolated > th.residual
        return (self.valid and self.monotone and extra_ok and self.final <= th.residual
                and self.est_order >= th.order)


def _default_step(t):
    return max(1e-4, 1e-2 * t)


def _stencil(op, field, k, t, X, h, f0):
    """(residual, term scale) of one stencil evaluation."""
    if op is Operator.SINGULAR_WAVE:
        dt = (field(t + h, X) - 2 * f0 + field(t - h, X)) / (h * h)
        pot = k * (1 - k) / (t * t) * f0
    else:
        dt = (field(t + h, X) - field(t - h, X)) / (2 * h)
        pot = k / t * f0 if op is Operator.SINGULAR_HEAT else 0.0
    lap, mag = 0.0, abs(dt) + abs(pot)
    for i in range(len(X)):
        e = np.zeros_like(X)
        e[i] = h
        d = (field(t, X + e) - 2 * f0 + field(t, X - e)) / (h * h)
        lap += d
        mag += abs(d)
    return dt + pot - lap, mag


def _residual_ladder(op, field, n, k, point, h, rungs, target, h_max):
    t, X = point
    X = np.asarray(X, dtype=float)
    if X.shape != (n,):
        raise DomainError(f"point must have dimension {n}")
    f0 = field(t, X)
    if h is None:
        h = _default_step(t)
    if h_max is not None:
        h = min(h, h_max)
    if target is not None:
        # residual ~ C h^2: rescale the pilot step so the first rung sits at target
        r, m = _stencil(op, field, k, t, X, h, f0)
        r = abs(r)
        if r > 0 and m > 0:
            h *= min(math.sqrt(target * m / r), 100.0)
        else:
            h *= 100.0
        cap = 0.5 * t if h_max is None else min(h_max, 0.5 * t)
        h = min(h, cap)
    if t - h <= 0:
        raise DomainError("stencil leaves t > 0")
    rep = _run_ladder(op, field, k, t, X, f0, h, rungs)
    if target is not None:
        # h^2 and h^4 terms cancelling at the top rung want smaller steps;
        # round-off at the bottom rung wants larger ones
        cap = 0.5 * t if h_max is None else min(h_max, 0.5 * t)
        for m in (2.0, 0.25, 4.0, 1 / 16, 1 / 64):
            if not rep.valid or (rep.monotone and rep.est_order >= 1.9):
                break
            if h * m <= cap:
                rep = _run_ladder(op, field, k, t, X, f0, h * m, rungs)
    return rep


def _run_ladder(op, field, k, t, X, f0, h, rungs):
    steps, res, signed = [], [], []
    mag = math.nan
    valid = True
    for j in range(rungs):
        hj = h / 2 ** j
        try:
            r, mag = _stencil(op, field, k, t, X, hj, f0)
        except LightConeError:
            r, mag, valid = math.nan, math.nan, False
        steps.append(hj)
        signed.append(r)
        res.append(abs(r))
    extra = math.nan
    if valid and mag > 0:
        extra = abs(4 * signed[-1] - signed[-2]) / 3 / mag
    if valid and res[-1] > 0 and res[-2] > 0:
        order = math.log2(res[-2] / res[-1])
    else:
        order = math.inf if valid else math.nan
    return ResidualReport(op, (t, tuple(X)), steps, res, abs(f0), order, valid, mag, extra)


def residual_heat(field: Callable, n: int, k: float, point, h: float | None = None,
                  operator: Operator = Operator.SINGULAR_HEAT, rungs: int = 4,
                  target: float | None = None, h_max: float | None = None) -> ResidualReport:
    """|(D_t + k/t - Lap_h) field| on the ladder h, h/2, ...; ``classical_heat`` drops k/t.

    Default first step max(1e-4, 1e-2 t).  With ``target`` the first step
    is rescaled from that pilot so the first rung's relative residual is
    about ``target`` (never above ``h_max`` or t/2).
    """
    operator = Operator(operator)
    if operator is Operator.SINGULAR_WAVE:
        raise DomainError("use residual_wave for the wave operator")
    return _residual_ladder(operator, field, n, k, point, h, rungs, target, h_max)


def residual_wave(field: Callable, n: int, k: float, point, h: float | None = None,
                  rungs: int = 4, target: float | None = None,
                  h_max: float | None = None) -> ResidualReport:
    """|(D_tt + k(1-k)/t^2 - Lap_h) field|; rungs touching r >= t are invalid."""
    return _residual_ladder(Operator.SINGULAR_WAVE, field, n, k, point, h, rungs, target, h_max)


def kernel_field(kind: str, n: int, k: float, Y=None, literal: bool = False):
    """field(t, X) for a kernel with source point Y (default the origin).

    kind: heat, scaled_heat, classical_heat, wave, classical_wave.
    """
    Y = np.zeros(n) if Y is None else np.asarray(Y, dtype=float)
    fn = {
        "heat": lambda q: kn.heat_kernel(q, literal),
        "scaled_heat": lambda q: kn.scaled_heat_kernel(q, literal),
        "classical_heat": kn.classical_heat_kernel,
        "wave": kn.wave_kernel,
        "classical_wave": kn.classical_wave_kernel,
    }[kind]

    def field(t, X):
        return fn(kn.KernelQuery(n, k, t, kn.radial_distance(X, Y)))
    return field


def random_probe(rng, n, t_range, r_frac=None, r_range=None):
    """A (t, X) probe with |X| drawn relative to t (r_frac) or absolutely (r_range)."""
    t = rng.uniform(*t_range)
    d = rng.normal(size=n)
    d /= np.linalg.norm(d)
    r = t * rng.uniform(*r_frac) if r_frac else rng.uniform(*r_range)
    return t, r * d


RESIDUAL_TARGET = 1e-4


def kernel_residual(kind: str, n: int, k: float, point, field=None,
                    target: float = RESIDUAL_TARGET) -> ResidualReport:
    """Residual ladder for a kernel family with a pilot-scaled first step.

    The step is capped at a quarter of the distance to the nearest
    singularity (r = 0, and the cone for the wave kernels).
    """
    field = field or kernel_field(kind, n, k)
    t, X = point
    r = float(np.linalg.norm(X))
    if kind in ("wave", "classical_wave"):
        return residual_wave(field, n, k, point, target=target, h_max=0.25 * min(r, t - r))
    op = {"heat": Operator.SINGULAR_HEAT, "scaled_heat": Operator.CLASSICAL_HEAT,
          "classical_heat": Operator.CLASSICAL_HEAT}[kind]
    return residual_heat(field, n, k, point, operator=op, target=target, h_max=0.25 * r)


# ---------------------------------------------------------------- limits


class LimitTarget(str, Enum):
    HEAT_K0 = "heat_k0"
    WAVE_K0 = "wave_k0"
    HEAT_IC = "heat_ic"
    WAVE_IC0 = "wave_ic0"
    WAVE_IC1 = "wave_ic1"


@dataclass
class LimitReport:
    target: LimitTarget
    ladder: list            # (parameter, distance)
    est_rate: float         # ratio of the last two distances
    monotone: bool = True

    @property
    def ratios(self) -> list:
        d = [v for _, v in self.ladder]
        return [b / a if a else math.nan for a, b in zip(d, d[1:])]

    @property
    def final(self) -> float:
        return self.ladder[-1][1]


def _kernel_limit_distance(target, n, k, probes):
    worst = 0.0
    for t, r in probes:
        q = kn.KernelQuery(n, k, t, r)
        if target is LimitTarget.HEAT_K0:
            ref = kn.classical_heat_kernel(q)
            val = kn.heat_kernel_shape(q)
        else:
            ref = kn.classical_wave_kernel(q)
            val = kn.wave_kernel(q)
        worst = max(worst, abs(val - ref) / abs(ref))
    return worst


def limit_ladder(target, n: int, ladder: Sequence[float], probes=None, k: float | None = None,
                 datum: InitialDatum | None = None, points=None, h_frac: float = 0.1) -> LimitReport:
    """Distance to a limit along a strictly decreasing parameter ladder.

    heat_k0 / wave_k0: ladder in k; probes are (t, r) pairs; the distance is
    the max relative gap to the classical kernel (for heat, the kernel is
    divided by Gamma(k) first, i.e. the literal normalization).
    heat_ic / wave_ic0 / wave_ic1: ladder in t at fixed k with ``datum``
    evaluated at ``points``; wave_ic1 uses a centered difference of w in t
    with step h_frac * t.
    """
    target = LimitTarget(target)
    ladder = [float(p) for p in ladder]
    if any(b >= a for a, b in zip(ladder, ladder[1:])):
        raise DomainError("ladder must be strictly decreasing")
    out = []
    for p in ladder:
        if target in (LimitTarget.HEAT_K0, LimitTarget.WAVE_K0):
            out.append((p, _kernel_limit_distance(target, n, p, probes)))
            continue
        if datum is None or k is None:
            raise DomainError("IC limits need k and a datum")
        pts = points if points is not None else [np.zeros(n)]
        worst = 0.0
        for X in pts:
            X = np.asarray(X, dtype=float)
            if target is LimitTarget.HEAT_IC:
                v = solve(SolveRequest(Problem.HEAT, n, k, p, X, datum)).value
                worst = max(worst, abs(v - float(datum(X))))
            elif target is LimitTarget.WAVE_IC0:
                worst = max(worst, abs(solve(SolveRequest(Problem.WAVE, n, k, p, X, datum)).value))
            else:
                h = h_frac * p
                wp = solve(SolveRequest(Problem.WAVE, n, k, p + h, X, datum)).value
                wm = solve(SolveRequest(Problem.WAVE, n, k, p - h, X, datum)).value
                worst = max(worst, abs((wp - wm) / (2 * h) - float(datum(X))))
        out.append((p, worst))
    d = [v for _, v in out]
    rate = d[-1] / d[-2] if len(d) > 1 and d[-2] else math.nan
    mono = all(b <= a * (1 + 1e-9) + 1e-15 for a, b in zip(d[2:], d[3:])) if len(d) > 3 else True
    return LimitReport(target, out, rate, mono)


# ------------------------------------------------------------- recursion


def ladder_index(n: int, index: str = "lower") -> float:
    """Operator index for the step n -> n+2: lower (n-3)/2, upper (n-1)/2."""
    if index == "lower":
        return (n - 3) / 2
    if index == "upper":
        return (n - 1) / 2
    raise ValueError(f"unknown index convention {index!r}")


def _ladder_step_x(x):
    return 1e-3 * x


@dataclass
class RecursionReport:
    max_rel_error: float
    ratios: list            # image / target at each grid point
    detail: str = ""


def recursion_check(n: int, k: float, grid, index: str = "lower", mode: str = "step",
                    chain_const: str = "recursion", full_output: bool = False):
    """Ladder-operator identities between the even-n wave kernels.

    mode="step": A^a applied to W_n versus W_{n+2}, a from ``index``.
    mode="chain": const * A^{(n-3)/2} ... A^{1/2} W_2 versus W_n, with the
    recursion constant (``chain_const="recursion"``) or the anchored one
    (``"anchor"``).  Returns the max relative error over the (t, r) grid.
    """
    errs, ratios = [], []
    for t, r in grid:
        x0 = t * t
        if mode == "step":
            if n % 2 or n < 2:
                raise DomainError("step check needs even n")
            a = ladder_index(n, index)
            if a <= 0:
                raise DomainError(f"ladder index {a} must be positive")

            def inner(x, n=n, r=r):
                return kn.wave_kernel(kn.KernelQuery(n, k, math.sqrt(x), r))
            img = kn.ladder_apply(a, r, inner, x0, _ladder_step_x(x0))
            ref = kn.wave_kernel(kn.KernelQuery(n + 2, k, t, r))
        elif mode == "chain":
            if n % 2 or n < 4:
                raise DomainError("chain check needs even n >= 4")
            f = lambda x, r=r: kn.wave_kernel_2d(kn.KernelQuery(2, k, math.sqrt(x), r))
            # indices 1/2, 3/2, ..., (n-3)/2 from the inside out
            # outer levels difference an already-differenced function: coarser steps
            for lvl, a in enumerate(np.arange(0.5, (n - 3) / 2 + 0.25, 1.0)):
                f = (lambda g, a, c: lambda x: kn.ladder_apply(a, r, g, x, c * _ladder_step_x(x)))(
                    f, float(a), 8.0 ** lvl)
            const = (kn.even_wave_const_closed(n, k, "recursion") if chain_const == "recursion"
                     else kn.even_wave_const(n, k))
            img = const * f(x0)
            ref = kn.wave_kernel(kn.KernelQuery(n, k, t, r))
        else:
            raise ValueError(f"unknown mode {mode!r}")
        ratios.append(img / ref)
        errs.append(abs(img - ref) / abs(ref))
    worst = max(errs)
    if full_output:
        return RecursionReport(worst, ratios)
    return worst


def cone_grid(t_values=(0.5, 0.75, 1.0, 1.25, 1.5), r_fracs=(0.1, 0.3, 0.5, 0.7, 0.9)):
    """Cone-interior (t, r) grid; 25 points by default."""
    return [(t, f * t) for t in t_values for f in r_fracs]


# ----------------------------------------------------- special functions


def hypU_lower(a: float, c: float, z: float) -> float:
    """U(a-1, c, z) from U(a, c, z) and U(a+1, c, z) by the three-term recurrence.

    Gives U for -1 <= a - 1 < 0, which the forward evaluator does not cover.
    """
    if a - 1 >= 0:
        return sf.hypU(a - 1, c, z)
    return -(c - 2 * a - z) * sf.hypU(a, c, z) - a * (a - c + 1) * sf.hypU(a + 1, c, z)


def _richardson_derivative(f, z, h):
    d1 = (f(z + h) - f(z - h)) / (2 * h)
    d2 = (f(z + h / 2) - f(z - h / 2)) / h
    return (4 * d2 - d1) / 3, abs(d2 - d1)


def u_identity_check(a: float, c: float, z_grid, literal: bool = False) -> float:
    """Max relative error of d/dz[-e^{-z} z^c U(a, c+1, z)] = e^{-z} z^{c-1} U(a-1, c, z).

    ``literal=True`` checks the variant with U(a, c, z) on the right, which
    is not an identity (it fails except in degenerate cases).
    """
    def lhs_fn(z):
        return -math.exp(-z) * z ** c * sf.hypU(a, c + 1, z)

    worst = 0.0
    for z in z_grid:
        z = float(z)
        if not z > 0:
            raise DomainError("z grid must lie in (0, inf)")
        h = 1e-3 * z
        d, _ = _richardson_derivative(lhs_fn, z, h)
        U = sf.hypU(a, c, z) if literal else hypU_lower(a, c, z)
        rhs = math.exp(-z) * z ** (c - 1) * U
        worst = max(worst, abs(d - rhs) / max(abs(rhs), 1e-300))
    return worst


@dataclass
class IdentityResult:
    name: str
    cases: int
    failures: int
    worst: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _count(name, cases, fn):
    fails, worst = 0, 0.0
    for args in cases:
        ok, err = fn(*args)
        fails += not ok
        worst = max(worst, err)
    return IdentityResult(name, len(cases), fails, worst)


def check_euler_transform(rng, m=1000, tol=1e-9):
    """F(a,b;c;z) = (1-z)^{c-a-b} F(c-a,c-b;c;z), z in [0, 0.9]."""
    def one(a, b, c, z):
        F = sf.hyp2f1(a, b, c, z)
        G = (1 - z) ** (c - a - b) * sf.hyp2f1(c - a, c - b, c, z)
        e = abs(F - G) / abs(F)
        return e <= tol, e
    cases = [(rng.uniform(0.05, 3), rng.uniform(0.05, 3), rng.uniform(0.1, 4), rng.uniform(0, 0.9))
             for _ in range(m)]
    return _count("euler_transform", cases, one)


def _deriv_case(f, target, z, tol):
    h = 1e-3 * min(z, 1 - z)
    d, _ = _richardson_derivative(f, z, h)
    e = abs(d - target) / max(abs(target), 1e-300)
    return e <= tol, e


def check_contiguity(rng, m=1000, tol=1e-6):
    """d/dz z^{c-1} F(a,b;c;z) = (c-1) z^{c-2} F(a,b;c-1;z)."""
    def one(a, b, c, z):
        f = lambda s: s ** (c - 1) * sf.hyp2f1(a, b, c, s)
        return _deriv_case(f, (c - 1) * z ** (c - 2) * sf.hyp2f1(a, b, c - 1, z), z, tol)
    cases = [(rng.uniform(0.05, 3), rng.uniform(0.05, 3), rng.uniform(1.1, 4), rng.uniform(0.05, 0.9))
             for _ in range(m)]
    return _count("derivative_contiguity", cases, one)


def check_derivative(rng, m=1000, tol=1e-6):
    """dF(a,b;c;z)/dz = (ab/c) F(a+1,b+1;c+1;z)."""
    def one(a, b, c, z):
        f = lambda s: sf.hyp2f1(a, b, c, s)
        return _deriv_case(f, a * b / c * sf.hyp2f1(a + 1, b + 1, c + 1, z), z, tol)
    cases = [(rng.uniform(0.05, 3), rng.uniform(0.05, 3), rng.uniform(0.1, 4), rng.uniform(0.05, 0.9))
             for _ in range(m)]
    return _count("derivative_formula", cases, one)


def check_gauss_point(rng, m=1000, j_lo=20, j_hi=30):
    """F(a,b;c;1-2^{-j}) approaches F(a,b;c;1) monotonically at rate 2^{-j min(c-a-b, 1)}."""
    def one(a, b, c):
        s = c - a - b
        F1 = sf.hyp2f1_at_one(a, b, c)
        floor = 1e-13 * abs(F1)
        d = [abs(sf.hyp2f1(a, b, c, 1 - 2.0 ** -j) - F1) for j in range(j_lo, j_hi + 1)]
        mono = all(y <= x * (1 + 1e-6) + floor for x, y in zip(d, d[1:]))
        bound = 3 * (j_hi / j_lo) * 2.0 ** (-(j_hi - j_lo) * min(s, 1.0)) * d[0]
        ok = mono and d[-1] <= max(bound, floor)
        return ok, d[-1] / abs(F1)
    cases = []
    while len(cases) < m:
        a, b = rng.uniform(0.05, 2), rng.uniform(0.05, 2)
        cases.append((a, b, a + b + rng.uniform(0.2, 3)))
    return _count("gauss_point", cases, one)


def check_u_large_z(rng, m=1000):
    """|z^a U(a,c,z) - 1| <= 5 a |c-a-1| / z for z >= 1e3."""
    def one(a, c, z):
        e = abs(z ** a * sf.hypU(a, c, z) - 1)
        bound = 5 * a * abs(c - a - 1) / z + 1e-13
        return e <= bound, e
    cases = [(rng.uniform(0.01, 3), rng.uniform(0.1, 4), 10 ** rng.uniform(3, 5)) for _ in range(m)]
    return _count("u_large_z", cases, one)


def check_u_small_z(rng, m=1000, j_lo=14, j_hi=20, order_tol=0.15):
    """U(a,c,z) z^{c-1} Gamma(a)/Gamma(c-1) -> 1 as z = 2^{-j} -> 0, c > 1.

    The deviation must decay at least like z^{min(c-1, 1)}: the order
    measured between the last two rungs may not fall below that by more
    than ``order_tol``.
    """
    def one(a, c):
        g = sf.gamma_ratio([a], [c - 1])
        dev = [abs(sf.hypU(a, c, 2.0 ** -j) * 2.0 ** (-j * (c - 1)) * g - 1) for j in (j_lo, j_hi)]
        if dev[-1] < 1e-11:
            return True, dev[-1]
        order = math.log2(dev[0] / dev[1]) / (j_hi - j_lo)
        return order >= min(c - 1, 1.0) - order_tol, dev[-1]
    cases = []
    while len(cases) < m:
        c = rng.uniform(1.2, 3.8)
        if abs(c - 2) < 0.15 or abs(c - 3) < 0.05:
            continue
        cases.append((rng.uniform(0.05, 3), c))
    return _count("u_small_z", cases, one)


def check_u_antiderivative(rng, m=1000, tol=1e-6):
    """d/dz[-e^{-z} z^c U(a,c+1,z)] = e^{-z} z^{c-1} U(a-1,c,z)."""
    def one(a, c, z):
        e = u_identity_check(a, c, [z])
        return e <= tol, e
    cases = [(rng.uniform(0.05, 3), rng.uniform(0.2, 3), rng.uniform(0.1, 20)) for _ in range(m)]
    return _count("u_antiderivative", cases, one)


IDENTITY_CHECKS = {
    "euler_transform": check_euler_transform,
    "derivative_contiguity": check_contiguity,
    "derivative_formula": check_derivative,
    "gauss_point": check_gauss_point,
    "u_large_z": check_u_large_z,
    "u_small_z": check_u_small_z,
    "u_antiderivative": check_u_antiderivative,
}


def identity_suite(seed: int = 0, m: int = 1000) -> list[IdentityResult]:
    rng = np.random.default_rng(seed)
    return [fn(rng, m) for fn in IDENTITY_CHECKS.values()]


# ----------------------------------------------------------------- suite


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""


SUITES = ("kernels", "mass", "limits", "ic", "closed", "recursion", "identities")


def _suite_kernels(ns, th, rng, points):
    out = []
    for n in ns:
        for k in (0.25, 0.5, 0.75):
            hf, wf = kernel_field("heat", n, k), kernel_field("wave", n, k)
            sf_ = kernel_field("scaled_heat", n, k)
            worst = {"heat": (0.0, math.inf), "wave": (0.0, math.inf), "scaled_heat": (0.0, math.inf)}
            ok = {key: True for key in worst}
            for _ in range(points):
                pt = random_probe(rng, n, (0.3, 1.5), r_range=(0.2, 1.5))
                rep = {"heat": kernel_residual("heat", n, k, pt, hf),
                       "scaled_heat": kernel_residual("scaled_heat", n, k, pt, sf_)}
                rep["wave"] = kernel_residual("wave", n, k,
                                              random_probe(rng, n, (0.5, 1.5), r_frac=(0.2, 0.8)), wf)
                for key, r in rep.items():
                    ok[key] &= r.passed(th)
                    worst[key] = (max(worst[key][0], r.final), min(worst[key][1], r.est_order))
            for key in worst:
                out.append(CheckResult("kernels", f"residual_{key} n={n} k={k}", ok[key], worst[key][0],
                                       th.residual, f"min order {worst[key][1]:.3f}"))
    return out


def _suite_mass(ns, th, rng):
    from scipy import integrate
    out = []
    for n in ns:
        k, t = rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0)
        f = lambda r: kn.heat_kernel(kn.KernelQuery(n, k, t, r)) * r ** (n - 1) if r > 0 else 0.0
        m = kn.sphere_area(n) * integrate.quad(f, 0, math.sqrt(4 * t * 80), epsabs=0, epsrel=1e-13,
                                                limit=400)[0]
        out.append(CheckResult("mass", f"heat_mass n={n} k={k:.3f} t={t:.3f}", abs(m - 1) <= th.mass,
                               abs(m - 1), th.mass))
    return out


def _suite_limits(ns, th):
    out = []
    ks = [2.0 ** -j for j in range(6, 13)]
    for n in ns:
        probes = [(1.0, 0.5), (0.5, 0.2), (2.0, 1.5)]
        for target in (LimitTarget.HEAT_K0, LimitTarget.WAVE_K0):
            rep = limit_ladder(target, n, ks, probes)
            rs = rep.ratios
            ok = all(abs(r - th.limit_ratio) <= th.limit_ratio_tol for r in rs)
            out.append(CheckResult("limits", f"{target.value} n={n}", ok, rep.final, th.limit_ratio,
                                   "ratios " + " ".join(f"{r:.3f}" for r in rs)))
    return out


def _suite_ic(ns, th):
    out = []
    for n in ns:
        g = Gaussian(np.full(n, 0.2), 1.0, 1.0)
        X = [np.zeros(n)]
        for k in (0.25, 0.5):
            rep = limit_ladder(LimitTarget.HEAT_IC, n, [4.0 ** -j for j in range(1, 9)], k=k, datum=g, points=X)
            out.append(CheckResult("ic", f"heat_ic n={n} k={k}", rep.final <= th.ic and rep.monotone,
                                   rep.final, th.ic))
            rep = limit_ladder(LimitTarget.WAVE_IC0, n, [10.0 ** -j for j in range(1, 4)], k=k, datum=g, points=X)
            out.append(CheckResult("ic", f"wave_ic0 n={n} k={k}", rep.final <= th.ic, rep.final, th.ic))
            rep = limit_ladder(LimitTarget.WAVE_IC1, n, [1e-3], k=k, datum=g, points=X)
            out.append(CheckResult("ic", f"wave_ic1 n={n} k={k}", rep.final <= th.ic, rep.final, th.ic))
    return out


def _suite_closed(ns, th):
    from .data import RadialPoly
    out = []
    for n in ns:
        one = RadialPoly(np.zeros(n), [1.0])
        X = np.full(n, 0.1)
        for k in (0.25, 0.5):
            w = solve(SolveRequest(Problem.WAVE, n, k, 0.7, X, one)).value
            u = solve(SolveRequest(Problem.HEAT, n, k, 0.7, X, one)).value
            out.append(CheckResult("closed", f"wave_g1 n={n} k={k}", abs(w - 0.7) <= th.closed_wave,
                                   abs(w - 0.7), th.closed_wave))
            out.append(CheckResult("closed", f"heat_f1 n={n} k={k}", abs(u - 1) <= th.closed_heat,
                                   abs(u - 1), th.closed_heat))
    return out


def _suite_recursion(ns, th):
    out = []
    grid = cone_grid()
    for n in ns:
        if n % 2 or n < 4 or n + 2 > kn.N_MAX:
            continue
        e = recursion_check(n, 0.4, grid)
        out.append(CheckResult("recursion", f"step n={n}->{n + 2}", e <= th.recursion, e, th.recursion))
    for n in ns:
        if n % 2 == 0 and 4 <= n <= 6:
            e = recursion_check(n, 0.5, grid, mode="chain")
            out.append(CheckResult("recursion", f"chain 2->{n}", e <= th.recursion, e, th.recursion))
    return out


def _suite_identities(th, m, seed):
    return [CheckResult("identities", r.name, r.passed, r.worst, 0.0,
                        f"{r.failures}/{r.cases} failures") for r in identity_suite(seed, m)]


def run_suite(suites: Sequence[str] = SUITES, ns: Sequence[int] = range(2, 9), seed: int = 0,
              points: int = 5, identity_cases: int = 200, th: Thresholds = THRESHOLDS) -> list[CheckResult]:
    """Run the named check groups and return one CheckResult per check."""
    rng = np.random.default_rng(seed)
    ns = [int(n) for n in ns]
    out: list[CheckResult] = []
    for s in suites:
        if s == "kernels":
            out += _suite_kernels(ns, th, rng, points)
        elif s == "mass":
            out += _suite_mass(ns, th, rng)
        elif s == "limits":
            out += _suite_limits(ns, th)
        elif s == "ic":
            out += _suite_ic([n for n in ns if n <= 5], th)
        elif s == "closed":
            out += _suite_closed(ns, th)
        elif s == "recursion":
            out += _suite_recursion(ns, th)
        elif s == "identities":
            out += _suite_identities(th, identity_cases, seed)
        else:
            raise DomainError(f"unknown suite {s!r}; choose from {', '.join(SUITES)}")
    return out
