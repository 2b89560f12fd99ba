"""Closed-form kernels of the singular heat and wave equations.

Heat:  (d/dt + k/t) u = Lap u
Wave:  w_tt + k(1-k)/t^2 w = Lap w

All kernels are radial: they depend on the source point only through
r = |X - Y|.  Wave kernels live inside the light cone r < t.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate

from . import specfun as sf
from .errors import DegeneracyError, DomainError, LightConeError, PoleError

N_MIN, N_MAX = 2, 8


class UncertifiedRangeWarning(UserWarning):
    """Wave kernel evaluated for k outside [0, 1]."""


def sphere_area(n: int) -> float:
    """Total measure of the unit sphere S^{n-1} in R^n."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def radial_distance(X, Y) -> float:
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    return float(np.sqrt(np.sum((X - Y) ** 2)))


@dataclass(frozen=True)
class KernelQuery:
    n: int
    k: float
    t: float
    r: float

    def __post_init__(self):
        if int(self.n) != self.n or not N_MIN <= self.n <= N_MAX:
            raise DomainError(f"dimension n must be an integer in [{N_MIN}, {N_MAX}] (got {self.n})")
        if not math.isfinite(self.k):
            raise DomainError("k must be finite")
        if not (self.t > 0 and math.isfinite(self.t)):
            raise DomainError(f"t must be positive and finite (got {self.t})")
        if not (self.r >= 0 and math.isfinite(self.r)):
            raise DomainError(f"r must be >= 0 and finite (got {self.r})")

    @classmethod
    def from_points(cls, n, k, t, X, Y) -> "KernelQuery":
        X = np.atleast_1d(np.asarray(X, dtype=float))
        if X.shape != (n,) or np.shape(Y) != (n,):
            raise DomainError(f"points must have dimension {n}")
        return cls(n, k, t, radial_distance(X, Y))

    def replace(self, **kw) -> "KernelQuery":
        d = dict(n=self.n, k=self.k, t=self.t, r=self.r)
        d.update(kw)
        return KernelQuery(**d)


@dataclass(frozen=True)
class GeneralSolutionCoeffs:
    A: float = 0.0
    B: float = 0.0


# ------------------------------------------------------------ normalizations


class Provenance(str, Enum):
    DERIVED = "derived_from_normalization"
    FORMULA = "closed_formula"


@dataclass(frozen=True)
class NormConstant:
    name: str
    value: float
    provenance: Provenance
    note: str = ""


def c2_const(k: float) -> float:
    """n = 2 wave constant Gamma(1+k/2) Gamma((3-k)/2) / pi^{3/2}."""
    return sf.gamma(1 + k / 2) * sf.gamma((3 - k) / 2) / math.pi ** 1.5


def _odd_bracket_integral(n: int, k: float) -> float:
    """int_0^1 F((1+k)/2, 1-k/2; (n+1)/2; z) dz by adaptive quadrature."""
    a, b, c = (1 + k) / 2, 1 - k / 2, (n + 1) / 2
    val, _ = integrate.quad(lambda z: sf.hyp2f1(a, b, c, z), 0.0, 1.0,
                            epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def odd_wave_norm_const(n: int, k: float) -> float:
    """Constant C_n making the odd-n kernel reproduce w_t(0, X) = g(X).

    Uses int_0^1 F((1+k)/2,1-k/2;(n+1)/2;z) dz
      = -2(n-1)/(k(k-1)) [F((k-1)/2,-k/2;(n-1)/2;1) - 1]
    so that C_n * omega_{n-1} * (that integral) / 2 = 1.
    """
    if n % 2 != 1 or n < 3:
        raise DomainError(f"odd-n constant needs odd n >= 3 (got {n})")
    kk = k * (k - 1)
    if kk == 0:
        raise DegeneracyError("k(k-1) = 0: the closed form is 0/0, use the limiting table entry")
    bracket = sf.hyp2f1_at_one((k - 1) / 2, -k / 2, (n - 1) / 2) - 1.0
    J = -2.0 * (n - 1) / kk * bracket
    return 2.0 / (sphere_area(n) * J)


def odd_wave_norm_const_literal(n: int, k: float) -> float:
    """Odd-n constant from the closed formula (its bracket does not normalize the kernel)."""
    g1 = sf.gamma((n - k) / 2) * sf.gamma((n - 1 - k) / 2)
    g2 = sf.gamma(n / 2) * sf.gamma((n - 1) / 2)
    return sf.gamma(n / 2) * k * (k - 1) / (2 * math.pi ** (n / 2) * (n - 1)) * g1 / (g1 - g2)


def even_wave_const(n: int, k: float) -> float:
    """Even-n kernel constant (2 pi)^{1-n/2} c_2(k); equals (2 pi)^{-n/2} at k = 0."""
    return (2 * math.pi) ** (1 - n / 2) * c2_const(k)


def even_wave_const_closed(n: int, k: float, variant: str = "recursion") -> float:
    """The two closed-form even-n constants.

    ``recursion``: 2^{n/2-1}(n-3)!! Gamma(n/2) / (((n-2)/2)! pi^{(n-1)/2}) * c_2
    ``direct``:    (n-3)!! Gamma(n/2) / (2^{1-n/2} ((n-2)/2)! pi^{(n-1)/2})
    """
    m = (n - 2) // 2
    base = sf.double_factorial(n - 3) * math.gamma(n / 2) / (math.factorial(m) * math.pi ** ((n - 1) / 2))
    if variant == "recursion":
        return 2 ** (n / 2 - 1) * base * c2_const(k)
    if variant == "direct":
        return base / 2 ** (1 - n / 2)
    raise ValueError(f"unknown variant {variant!r}")


def J2_const(k: float) -> float:
    """int_0^1 (1-z)^{-1/2} F((1-k)/2, k/2; 1/2; 1-z) dz = sqrt(pi) / (Gamma(1+k/2) Gamma((3-k)/2))."""
    return math.sqrt(math.pi) / (sf.gamma(1 + k / 2) * sf.gamma((3 - k) / 2))


def even_solver_const(n: int, k: float) -> float:
    """Overall constant of the even-n (n >= 4) solver.

    w = K * t * D^m[x^m M(x)] at x = t^2, m = (n-2)/2, with
    M(x) = 1/2 int_0^1 (1-z)^{-1/2} F(...; 1-z) g#(sqrt(xz)) dz.
    Since D^m[x^m M] -> m! M(0), w_t(0) = g forces K = 2 / (m! omega_{n-1} J2).
    """
    m = (n - 2) // 2
    return 2.0 / (math.factorial(m) * sphere_area(n) * J2_const(k))


def even_solver_const_closed(n: int, k: float) -> float:
    """Closed-form constant c_n c_2 2^{-(n-2)/2} ((n-2)/2)! / (n-3)!!, c_n from the direct variant."""
    m = (n - 2) // 2
    return (even_wave_const_closed(n, k, "direct") * c2_const(k) * 2.0 ** (-m)
            * math.factorial(m) / sf.double_factorial(n - 3))


@lru_cache(maxsize=512)
def _heat_consts(k: float):
    return (NormConstant("heat", sf.gamma(k + 1), Provenance.DERIVED, "unit mass"),
            NormConstant("heat_literal", sf.gamma(k), Provenance.FORMULA, "mass 1/k"))


@lru_cache(maxsize=512)
def _odd_consts(n: int, k: float):
    kk = k * (k - 1)
    if abs(kk) < 1e-6:
        derived = NormConstant("C_n", 2.0 / (sphere_area(n) * _odd_bracket_integral(n, k)),
                               Provenance.DERIVED, "bracket integral by quadrature")
    else:
        derived = NormConstant("C_n", odd_wave_norm_const(n, k), Provenance.DERIVED)
    out = [derived]
    if kk != 0:
        out.append(NormConstant("C_n_literal", odd_wave_norm_const_literal(n, k), Provenance.FORMULA))
        out.append(NormConstant("C_n_chain", 2.0 * derived.value, Provenance.FORMULA,
                                "normalization equation without the factor 2"))
    return tuple(out)


@lru_cache(maxsize=512)
def _even_consts(n: int, k: float):
    return (NormConstant("c_n", even_wave_const(n, k), Provenance.DERIVED, "k -> 0 classical anchor"),
            NormConstant("c_n_recursion", even_wave_const_closed(n, k, "recursion"), Provenance.FORMULA),
            NormConstant("c_n_direct", even_wave_const_closed(n, k, "direct"), Provenance.FORMULA),
            NormConstant("K_n", even_solver_const(n, k), Provenance.DERIVED, "solver, w_t(0)=g"),
            NormConstant("K_n_closed", even_solver_const_closed(n, k), Provenance.FORMULA))


class NormalizationTable:
    """Read-only lookup of kernel constants; values are cached per (n, k)."""

    def heat(self, k: float, literal: bool = False) -> float:
        return _heat_consts(float(k))[1 if literal else 0].value

    def c2(self, k: float) -> float:
        return c2_const(k)

    def odd(self, n: int, k: float) -> float:
        return _odd_consts(int(n), float(k))[0].value

    def even(self, n: int, k: float) -> float:
        return _even_consts(int(n), float(k))[0].value

    def even_solver(self, n: int, k: float) -> float:
        return _even_consts(int(n), float(k))[3].value

    def entries(self, n: int, k: float) -> list[NormConstant]:
        """Every constant recorded for (n, k), derived and closed-form."""
        n, k = int(n), float(k)
        out = list(_heat_consts(k)) if k > 0 else []
        if n == 2:
            out.append(NormConstant("c_2", c2_const(k), Provenance.DERIVED,
                                    "matches the closed formula"))
        elif n % 2:
            out.extend(_odd_consts(n, k))
        else:
            out.extend(_even_consts(n, k))
        return out


DEFAULT_NORMS = NormalizationTable()


# ------------------------------------------------------------------ heat


def _check_heat_k(k):
    if not k > 0:
        raise DomainError(f"heat kernel needs k > 0 (got {k})")


def heat_kernel_shape(q: KernelQuery) -> float:
    """(4 pi t)^{-n/2} e^{-z} U(k, n/2, z), z = r^2/4t: the heat kernel without its constant."""
    _check_heat_k(q.k)
    if q.r == 0:
        return math.inf
    z = q.r * q.r / (4 * q.t)
    return (4 * math.pi * q.t) ** (-q.n / 2) * math.exp(-z) * sf.hypU(q.k, q.n / 2, z)


def heat_kernel(q: KernelQuery, literal: bool = False) -> float:
    """Singular heat kernel Gamma(k+1) (4 pi t)^{-n/2} e^{-z} U(k, n/2, z).

    The default constant gives unit mass.  ``literal=True`` uses Gamma(k),
    whose kernel integrates to 1/k.  At r = 0 the kernel is +inf.
    """
    shape = heat_kernel_shape(q)
    return DEFAULT_NORMS.heat(q.k, literal) * shape


def scaled_heat_kernel(q: KernelQuery, literal: bool = False) -> float:
    """t^k H: solves the classical heat equation away from r = 0."""
    return q.t ** q.k * heat_kernel(q, literal)


def classical_heat_kernel(q: KernelQuery) -> float:
    return (4 * math.pi * q.t) ** (-q.n / 2) * math.exp(-q.r * q.r / (4 * q.t))


def heat_general_solution(q: KernelQuery, coeffs: GeneralSolutionCoeffs) -> float:
    """A t^{-n/2} 1F1(n/2-k; n/2; -z) + B t^{-n/2} e^{-z} U(k, n/2, z), z = r^2/4t."""
    n, k, t = q.n, q.k, q.t
    z = q.r * q.r / (4 * t)
    out = 0.0
    if coeffs.A:
        out += coeffs.A * t ** (-n / 2) * sf.hyp1f1(n / 2 - k, n / 2, -z)
    if coeffs.B:
        if q.r == 0:
            return math.copysign(math.inf, coeffs.B)
        out += coeffs.B * t ** (-n / 2) * math.exp(-z) * sf.hypU(k, n / 2, z)
    return out


# ------------------------------------------------------------------ wave


def _wave_prelude(q: KernelQuery):
    if q.r >= q.t:
        raise LightConeError(f"r = {q.r} is not inside the light cone t = {q.t}")
    if not 0 <= q.k <= 1:
        warnings.warn(f"wave kernels are certified for 0 <= k <= 1 (got {q.k})",
                      UncertifiedRangeWarning, stacklevel=3)
    s = (q.r / q.t) ** 2
    return s, 1.0 - s


def _F_or_inf(a, b, c, z):
    try:
        return sf.hyp2f1(a, b, c, z)
    except DomainError:
        if z == 1.0:
            return math.inf
        raise


def _phi1(n, k, t, s, zc):
    # Euler-transformed: t^{1-n} s^{(2-n)/2} F((1+k)/2, 1-k/2; (n+1)/2; 1-s)
    F = sf.hyp2f1((1 + k) / 2, 1 - k / 2, (n + 1) / 2, zc)
    if n == 2:
        return t ** -1 * F
    if s == 0:
        return math.inf
    return t ** (1 - n) * s ** ((2 - n) / 2) * F


def _phi2(n, k, t, r, zc):
    c = (3 - n) / 2
    if sf.is_nonpositive_integer(c):
        raise PoleError(f"second wave branch has c = {c}, a 2F1 pole, for odd n = {n}")
    F = _F_or_inf((1 - k) / 2, k / 2, c, zc)
    return (t * t - r * r) ** ((1 - n) / 2) * F


def wave_kernel_2d(q: KernelQuery) -> float:
    """c_2 (t^2 - r^2)^{-1/2} F(k/2, (1-k)/2; 1/2; 1 - r^2/t^2)."""
    if q.n != 2:
        raise DomainError("wave_kernel_2d needs n = 2")
    _, zc = _wave_prelude(q)
    return c2_const(q.k) * _phi2(2, q.k, q.t, q.r, zc)


def wave_kernel_odd(q: KernelQuery, norms: NormalizationTable | None = None) -> float:
    """C_n t^{1-n} F((n-k)/2, (n-1+k)/2; (n+1)/2; 1 - r^2/t^2), n odd.

    Evaluated after Euler's transformation, which turns the singular factor
    at r -> 0 into the explicit power (r/t)^{2-n}.
    """
    if q.n % 2 != 1:
        raise DomainError(f"wave_kernel_odd needs odd n (got {q.n})")
    s, zc = _wave_prelude(q)
    norms = norms or DEFAULT_NORMS
    return norms.odd(q.n, q.k) * _phi1(q.n, q.k, q.t, s, zc)


def wave_kernel_even(q: KernelQuery, norms: NormalizationTable | None = None) -> float:
    """c_n (t^2 - r^2)^{(1-n)/2} F((1-k)/2, k/2; (3-n)/2; 1 - r^2/t^2), n >= 4 even."""
    if q.n % 2 or q.n < 4:
        raise DomainError(f"wave_kernel_even needs even n >= 4 (got {q.n})")
    _, zc = _wave_prelude(q)
    norms = norms or DEFAULT_NORMS
    return norms.even(q.n, q.k) * _phi2(q.n, q.k, q.t, q.r, zc)


def wave_kernel(q: KernelQuery, norms: NormalizationTable | None = None) -> float:
    if q.n == 2:
        return wave_kernel_2d(q)
    if q.n % 2:
        return wave_kernel_odd(q, norms)
    return wave_kernel_even(q, norms)


def classical_wave_kernel(q: KernelQuery) -> float:
    """(2 pi)^{-n/2} (t^2 - r^2)^{(1-n)/2}."""
    if q.r >= q.t:
        raise LightConeError(f"r = {q.r} is not inside the light cone t = {q.t}")
    return (2 * math.pi) ** (-q.n / 2) * (q.t * q.t - q.r * q.r) ** ((1 - q.n) / 2)


def wave_general_solution(q: KernelQuery, coeffs: GeneralSolutionCoeffs) -> float:
    """A phi_1 + B phi_2 with

    phi_1 = t^{1-n} F((n-k)/2, (n-1+k)/2; (n+1)/2; 1 - r^2/t^2)
    phi_2 = (t^2 - r^2)^{(1-n)/2} F((1-k)/2, k/2; (3-n)/2; 1 - r^2/t^2)

    phi_2 does not exist for odd n (its third parameter is a nonpositive
    integer); asking for it raises PoleError.
    """
    s, zc = _wave_prelude(q)
    out = 0.0
    if coeffs.A:
        out += coeffs.A * _phi1(q.n, q.k, q.t, s, zc)
    if coeffs.B:
        out += coeffs.B * _phi2(q.n, q.k, q.t, q.r, zc)
    return out


KERNELS = {
    "heat": heat_kernel,
    "scaled_heat": scaled_heat_kernel,
    "classical_heat": classical_heat_kernel,
    "wave": wave_kernel,
    "classical_wave": classical_wave_kernel,
}


def evaluate_kernel(kind: str, q: KernelQuery) -> tuple[float, str, float]:
    """(value, branch, est_error) for a kernel family named in ``KERNELS``.

    branch and est_error come from the special function behind the kernel;
    the closed-form classical kernels report "closed_form".
    """
    try:
        fn = KERNELS[kind]
    except KeyError:
        raise DomainError(f"unknown kernel {kind!r}; choose from {sorted(KERNELS)}") from None
    val = fn(q)
    if not math.isfinite(val):
        return val, "singular", 0.0
    if kind.startswith("classical"):
        return val, "closed_form", 4 * sf._EPS * abs(val)
    if kind in ("heat", "scaled_heat"):
        sp, d = sf.hypU(q.k, q.n / 2, q.r * q.r / (4 * q.t), full_output=True)
    else:
        zc = 1.0 - (q.r / q.t) ** 2
        args = (((1 + q.k) / 2, 1 - q.k / 2, (q.n + 1) / 2) if q.n % 2
                else ((1 - q.k) / 2, q.k / 2, (3 - q.n) / 2))
        sp, d = sf.hyp2f1(*args, zc, full_output=True)
    rel = d.est_error / abs(sp) if sp else 0.0
    return val, d.branch.value, float(abs(val) * (rel + 8 * sf._EPS))


# ---------------------------------------------------------- ladder operator


def _cdiff(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def ladder_apply(a: float, r: float, inner: Callable[[float], float], x: float,
                 step: float) -> float:
    """(a r^2)^{-1} (x f'(x) + a f(x)), f' by centered differences.

    The derivative uses steps h, h/2, h/4; the result is the Richardson
    combination of the last two.  If the three rungs do not show second
    order the step is rejected.
    """
    if not (a > 0 and r > 0 and x > 0 and step > 0):
        raise DomainError("ladder_apply needs a, r, x, step > 0")
    if step >= x:
        raise DomainError("step must be smaller than x")
    f0 = inner(x)
    d1, d2, d3 = (_cdiff(inner, x, step / m) for m in (1, 2, 4))
    e1, e2 = d1 - d2, d2 - d3
    noise = 64 * sf._EPS * (abs(f0) + abs(d1) * x) / step
    if abs(e1) > noise and abs(e2) > noise / 4:
        ratio = e1 / e2
        if not 2.5 < ratio < 6.5:
            raise DomainError(f"step {step} too large: difference ratio {ratio:.3g}, expected ~4")
    deriv = (4 * d3 - d2) / 3
    return (x * deriv + a * f0) / (a * r * r)
