"""Real special functions used by the kernels.

Gamma family, Pochhammer symbols, double factorials, Kummer's 1F1, the
Tricomi function U and the Gauss function 2F1 on 0 <= z <= 1.  Every
hypergeometric evaluator returns a float; pass ``full_output=True`` to get
``(value, EvalDiagnostics)`` instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special as sc

from .errors import ConvergenceError, DegeneracyError, DomainError, PoleError

EULER_GAMMA = 0.57721566490153286061
_EPS = np.finfo(float).eps

# |c - nearest integer| below this counts as an integer (U and 2F1 dispatch).
INTEGER_TOL = 1e-6


@dataclass(frozen=True)
class SeriesControl:
    rel_tol: float = 1e-13
    abs_floor: float = 1e-300
    max_terms: int = 600

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if self.abs_floor < 0:
            raise DomainError("abs_floor must be >= 0")


DEFAULT_CONTROL = SeriesControl()


class Branch(str, Enum):
    DIRECT_SERIES = "direct_series"
    CONNECTION = "connection"
    LOG_SERIES = "log_series"
    INTEGRAL_REP = "integral_rep"
    GAUSS_POINT = "gauss_point"
    EULER_TRANSFORM = "euler_transform"


@dataclass(frozen=True)
class EvalDiagnostics:
    terms_used: int
    branch: Branch
    est_error: float


def _out(value, diag, full_output):
    return (value, diag) if full_output else value


def is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


# ---------------------------------------------------------------- gamma family


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(ln|Gamma(x)|, sign(Gamma(x)))``."""
    if is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at x={x}")
    val = math.lgamma(x)
    if x > 0:
        return val, 1
    return val, (-1 if math.ceil(-x) % 2 else 1)


def gamma(x: float) -> float:
    if is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at x={x}")
    return math.gamma(x)


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if is_nonpositive_integer(x):
        return 0.0
    if x > 170.0:
        return math.exp(-math.lgamma(x))
    return 1.0 / math.gamma(x)


def gamma_ratio(num, den) -> float:
    """prod Gamma(num) / prod Gamma(den), in log space with sign tracking.

    A pole in the denominator makes the ratio zero; a pole in the numerator
    raises PoleError.
    """
    if any(is_nonpositive_integer(d) for d in den):
        if any(is_nonpositive_integer(v) for v in num):
            raise DegeneracyError("poles in numerator and denominator of a Gamma ratio")
        return 0.0
    log_val, sign = 0.0, 1
    for v in num:
        lv, s = log_gamma(v)
        log_val += lv
        sign *= s
    for v in den:
        lv, s = log_gamma(v)
        log_val -= lv
        sign *= s
    if log_val > 709.0:
        raise OverflowError("Gamma ratio overflows float64")
    return sign * math.exp(log_val)


def digamma(x: float) -> float:
    if is_nonpositive_integer(x):
        raise PoleError(f"digamma has a pole at x={x}")
    return float(sc.digamma(x))


def pochhammer(a: float, m: int) -> float:
    """Rising factorial (a)_m as a running product."""
    if m < 0 or int(m) != m:
        raise DomainError("pochhammer needs a nonnegative integer m")
    out = 1.0
    for j in range(int(m)):
        out *= a + j
        if not math.isfinite(out):
            raise OverflowError(f"(a)_m overflows for a={a}, m={m}")
    return out


def double_factorial(m: int) -> int:
    """m!! with (-1)!! = 0!! = 1."""
    if int(m) != m or m < -1:
        raise DomainError("double_factorial needs an integer m >= -1")
    return math.prod(range(int(m), 0, -2)) if m > 0 else 1


# ---------------------------------------------------------------- series cores


def _sum_series(ratio, ctl: SeriesControl, what: str):
    """Sum sum_j t_j with t_0 = 1 and t_{j+1} = t_j * ratio(j).

    Returns (value, terms_used, est_error).  Stops on an exact zero term
    (terminating series) or once two consecutive terms fall under
    rel_tol * |sum| while decreasing.
    """
    term, total, biggest = 1.0, 1.0, 1.0
    small = 0
    for j in range(ctl.max_terms):
        r = ratio(j)
        new = term * r
        if new == 0.0:
            return total, j + 1, _EPS * biggest * (j + 1)
        total += new
        biggest = max(biggest, abs(total), abs(new))
        if abs(new) <= ctl.rel_tol * abs(total) + ctl.abs_floor and abs(new) <= abs(term):
            small += 1
            if small >= 2:
                rho = min(abs(r), 0.999)
                tail = abs(new) * rho / (1.0 - rho)
                return total, j + 2, tail + 4 * _EPS * biggest * math.sqrt(j + 2)
        else:
            small = 0
        term = new
    raise ConvergenceError(f"{what}: no convergence in {ctl.max_terms} terms", partial=total)


def _series_2f1(a, b, c, z, ctl):
    return _sum_series(lambda j: (a + j) * (b + j) / ((c + j) * (j + 1)) * z, ctl, "2F1 series")


def _series_1f1(a, c, z, ctl):
    return _sum_series(lambda j: (a + j) / ((c + j) * (j + 1)) * z, ctl, "1F1 series")


# ---------------------------------------------------------------- 1F1


def hyp1f1(a: float, c: float, z: float, ctl: SeriesControl | None = None, full_output=False):
    """Kummer's confluent function 1F1(a; c; z) by its power series.

    Negative z goes through Kummer's transform e^z 1F1(c-a; c; -z) so the
    summed terms stay one-signed when a and c are positive.
    """
    ctl = ctl or DEFAULT_CONTROL
    if is_nonpositive_integer(c):
        raise PoleError(f"1F1 undefined for c={c}")
    if z == 0.0:
        return _out(1.0, EvalDiagnostics(1, Branch.DIRECT_SERIES, 0.0), full_output)
    if z < 0 and not is_nonpositive_integer(a):
        val, n, err = _series_1f1(c - a, c, -z, ctl)
        scale = math.exp(z)
        return _out(val * scale, EvalDiagnostics(n, Branch.DIRECT_SERIES, err * scale), full_output)
    val, n, err = _series_1f1(a, c, z, ctl)
    return _out(val, EvalDiagnostics(n, Branch.DIRECT_SERIES, err), full_output)


# ---------------------------------------------------------------- Tricomi U


def _hypu_two_series(a, c, z, ctl):
    """U from the 1F1 pair; returns (value, terms, err, amplification)."""
    m1, n1, e1 = _series_1f1(a, c, z, ctl)
    m2, n2, e2 = _series_1f1(a + 1 - c, 2 - c, z, ctl)
    pre = math.pi / math.sin(math.pi * c)
    t1 = pre * m1 * rgamma(c) * rgamma(1 + a - c)
    zp = z ** (1 - c)
    t2 = pre * zp * m2 * rgamma(a) * rgamma(2 - c)
    val = t1 - t2
    size = abs(t1) + abs(t2)
    amp = size / abs(val) if val != 0 else math.inf
    err = (abs(pre * rgamma(c) * rgamma(1 + a - c)) * e1
           + abs(pre * zp * rgamma(a) * rgamma(2 - c)) * e2
           + 8 * _EPS * size)
    return val, n1 + n2, err, amp


_DE_STEP = 1.0 / 48.0


def _hypu_integral(a, c, z):
    """U(a, c, z) = Gamma(a)^-1 int_0^inf e^{-zs} s^{a-1} (1+s)^{c-a-1} ds.

    Written in x = ln s and mapped by x = x0 + L sinh(tau); the trapezoid
    rule in tau is then double-exponentially convergent and uses fixed
    nodes, so the result is a smooth function of (a, c, z).
    Returns (value, nodes, est_error).
    """
    p = c - a - 1.0

    def dphi(x):
        ex = math.exp(x)
        return -z * ex + a + p * ex / (1.0 + ex)

    lo, hi = -200.0, 200.0 - max(math.log(z), 0.0)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if dphi(mid) > 0:
            lo = mid
        else:
            hi = mid
    x0 = 0.5 * (lo + hi)
    ex0 = math.exp(x0)
    curv = abs(-z * ex0 + p * ex0 / (1.0 + ex0) ** 2)
    scale = min(max(1.0 / math.sqrt(curv) if curv > 0 else 5.0, 0.25), 5.0)

    # log-integrand tail needs ~50 units of decay on each side
    left = (60.0 + 60.0 / a) / scale
    right = (abs(x0) + 60.0 + math.log1p(60.0 / z)) / scale
    t_lo, t_hi = -math.asinh(left), math.asinh(right)
    j_lo, j_hi = math.floor(t_lo / _DE_STEP), math.ceil(t_hi / _DE_STEP)
    tau = np.arange(j_lo, j_hi + 1) * _DE_STEP
    x = x0 + scale * np.sinh(tau)
    ex = np.exp(np.minimum(x, 700.0))
    with np.errstate(over="ignore"):
        logf = -z * ex + a * x + p * np.logaddexp(0.0, x) + np.log(scale * np.cosh(tau))
    peak = logf.max()
    w = np.exp(logf - peak)
    fine = w.sum() * _DE_STEP
    coarse = w[(np.arange(w.size) + j_lo) % 2 == 0].sum() * 2 * _DE_STEP
    lg, _ = log_gamma(a)
    factor = math.exp(peak - lg)
    val = fine * factor
    # the half-step difference bounds the error of the coarse rule, so it is conservative
    est = abs(fine - coarse) * factor + 16 * _EPS * abs(val)
    return val, int(w.size), est


def hypU(a: float, c: float, z: float, ctl: SeriesControl | None = None,
         full_output=False, max_amplification: float = 16.0):
    """Tricomi's confluent function U(a, c, z) for z > 0, a >= 0.

    Non-integer c uses the two-1F1 combination with pi/sin(pi c); when c is
    within INTEGER_TOL of an integer, or when that combination cancels by
    more than ``max_amplification``, the Laplace integral is used instead.
    """
    ctl = ctl or DEFAULT_CONTROL
    if not z > 0:
        raise DomainError(f"U needs z > 0 (got {z})")
    if a < 0:
        raise DomainError("U is only provided for a >= 0")
    if a == 0:
        return _out(1.0, EvalDiagnostics(0, Branch.DIRECT_SERIES, 0.0), full_output)
    if abs(c - round(c)) >= INTEGER_TOL and z <= 40.0:
        try:
            val, n, err, amp = _hypu_two_series(a, c, z, ctl)
        except ConvergenceError:
            amp = math.inf
        if amp <= max_amplification:
            return _out(val, EvalDiagnostics(n, Branch.DIRECT_SERIES, err), full_output)
    val, n, err = _hypu_integral(a, c, z)
    return _out(val, EvalDiagnostics(n, Branch.INTEGRAL_REP, err), full_output)


# ---------------------------------------------------------------- 2F1


def _log_series(a, b, m, z, ctl):
    """2F1(a, b; a+b+m; z) for integer m >= 0 and 0.5 < z < 1.

    Finite sum plus logarithmic series in w = 1 - z.
    """
    w = 1.0 - z
    c = a + b + m
    lw = math.log(w)
    # finite part
    fin = 0.0
    if m > 0:
        g = rgamma(a + m) * rgamma(b + m)
        term = 1.0
        for j in range(m):
            fin += term * math.factorial(m - j - 1)
            term *= (a + j) * (b + j) / (j + 1) * (-w)
        fin *= g
    # log part: -(-w)^m / (Gamma(a) Gamma(b)) sum_j coef_j w^j [ln w - psi(j+1) - psi(j+m+1) + psi(a+j+m) + psi(b+j+m)]
    ga, gb = rgamma(a), rgamma(b)
    am, bm = a + m, b + m
    if is_nonpositive_integer(am) or is_nonpositive_integer(bm):
        raise DegeneracyError("log series hits a digamma pole")
    coef = 1.0 / math.factorial(m)
    psi1, psim = -EULER_GAMMA, digamma(m + 1.0)
    psia, psib = digamma(am), digamma(bm)
    total, biggest, small = 0.0, 0.0, 0
    # pair 1/Gamma(a) with psi(a+m) so tiny a stays accurate (both may be extreme)
    for j in range(ctl.max_terms):
        br = (lw - psi1 - psim) * ga * gb + psia * ga * gb + psib * ga * gb
        term = coef * br
        total += term
        biggest = max(biggest, abs(total), abs(term))
        if abs(term) <= ctl.rel_tol * abs(total) + ctl.abs_floor and j > 2:
            small += 1
            if small >= 2:
                break
        else:
            small = 0
        coef *= (am + j) * (bm + j) / ((j + 1) * (j + 1 + m)) * w
        psi1 += 1.0 / (j + 1)
        psim += 1.0 / (j + 1 + m)
        psia += 1.0 / (am + j)
        psib += 1.0 / (bm + j)
    else:
        raise ConvergenceError("2F1 log series did not converge", partial=total)
    logpart = -((-w) ** m) * total
    val = gamma(c) * (fin + logpart)
    err = abs(gamma(c)) * (abs(fin) + abs(logpart) + biggest * w ** m) * 32 * _EPS + abs(term) * 2
    return val, j + 1 + m, err


def hyp2f1(a: float, b: float, c: float, z: float, ctl: SeriesControl | None = None,
           full_output=False):
    """Gauss hypergeometric 2F1(a, b; c; z) for 0 <= z <= 1.

    Dispatch: z <= 0.5 direct series; terminating parameters direct
    polynomial; otherwise the connection formula to 1 - z, or the
    logarithmic expansion when c - a - b is an integer.  z = 1 uses Gauss's
    summation.
    """
    ctl = ctl or DEFAULT_CONTROL
    if is_nonpositive_integer(c):
        raise PoleError(f"2F1 undefined for c={c}")
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"2F1 is provided on 0 <= z <= 1 only (got {z})")
    if is_nonpositive_integer(a) or is_nonpositive_integer(b):
        val, n, err = _series_2f1(a, b, c, z, ctl)
        return _out(val, EvalDiagnostics(n, Branch.DIRECT_SERIES, err), full_output)
    if z == 1.0:
        val = hyp2f1_at_one(a, b, c)
        return _out(val, EvalDiagnostics(0, Branch.GAUSS_POINT, 16 * _EPS * abs(val)), full_output)
    if z <= 0.5:
        val, n, err = _series_2f1(a, b, c, z, ctl)
        return _out(val, EvalDiagnostics(n, Branch.DIRECT_SERIES, err), full_output)

    w = 1.0 - z
    s = c - a - b
    if is_nonpositive_integer(c - a) or is_nonpositive_integer(c - b):
        val, n, err = _series_2f1(c - a, c - b, c, z, ctl)
        pre = w ** s
        return _out(val * pre, EvalDiagnostics(n, Branch.EULER_TRANSFORM, err * pre), full_output)

    m = round(s)
    delta = abs(s - m)
    if delta >= INTEGER_TOL:
        s1, n1, e1 = _series_2f1(a, b, a + b - c + 1, w, ctl)
        s2, n2, e2 = _series_2f1(c - a, c - b, s + 1, w, ctl)
        g1 = gamma_ratio([c, s], [c - a, c - b])
        g2 = gamma_ratio([c, -s], [a, b]) * w ** s
        t1, t2 = g1 * s1, g2 * s2
        val = t1 + t2
        if abs(t1) + abs(t2) > 100 * abs(val) and z <= 0.95:
            # heavy cancellation between the two branches: sum the series directly
            big = SeriesControl(ctl.rel_tol, ctl.abs_floor, max(ctl.max_terms, 1500))
            v2, n, err = _series_2f1(a, b, c, z, big)
            return _out(v2, EvalDiagnostics(n, Branch.DIRECT_SERIES, err), full_output)
        err = abs(g1) * e1 + abs(g2) * e2 + 8 * _EPS * (abs(t1) + abs(t2))
        return _out(val, EvalDiagnostics(n1 + n2, Branch.CONNECTION, err), full_output)

    if delta > 0 and z <= 0.95:
        # near-integer but not integer: the series still converges here
        big = SeriesControl(ctl.rel_tol, ctl.abs_floor, max(ctl.max_terms, 1500))
        val, n, err = _series_2f1(a, b, c, z, big)
        return _out(val, EvalDiagnostics(n, Branch.DIRECT_SERIES, err), full_output)

    if m >= 0:
        val, n, err = _log_series(a, b, m, z, ctl)
    else:
        # Euler transform first so the log expansion runs with c - a' - b' = -m > 0
        inner, n, err = _log_series(c - a, c - b, -m, z, ctl)
        pre = w ** m
        val, err = inner * pre, err * pre
    if delta > 0:
        err += delta * abs(val) * (2.0 + abs(math.log(w)))
    return _out(val, EvalDiagnostics(n, Branch.LOG_SERIES, err), full_output)


def hyp2f1_at_one(a: float, b: float, c: float) -> float:
    """Gauss summation 2F1(a, b; c; 1) = G(c)G(c-a-b) / (G(c-a)G(c-b)), a+b-c < 0."""
    if is_nonpositive_integer(c):
        raise PoleError(f"2F1 undefined for c={c}")
    if is_nonpositive_integer(a) or is_nonpositive_integer(b):
        val, _, _ = _series_2f1(a, b, c, 1.0, DEFAULT_CONTROL)
        return val
    if a + b - c >= 0:
        raise DomainError(f"2F1(a,b;c;1) diverges for a+b-c = {a + b - c} >= 0")
    return gamma_ratio([c, c - a - b], [c - a, c - b])
