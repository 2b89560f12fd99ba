import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from singkern import kernels as kn
from singkern import specfun as sf
from singkern import verify as v
from singkern.data import Bump, Gaussian, SumDatum
from singkern.solvers import Problem, SolveRequest, solve

dims = st.integers(2, 8)
ks = st.floats(0.05, 0.95)
lams = st.floats(0.5, 4.0)
fracs = st.floats(0.05, 0.95)
slow = settings(max_examples=25, deadline=None)


def Q(n, k, t, r):
    return kn.KernelQuery(n, k, t, r)


class TestKernelScaling:
    @settings(deadline=None)
    @given(n=dims, k=ks, t=st.floats(0.1, 3.0), r=st.floats(0.05, 3.0), lam=lams)
    def test_heat(self, n, k, t, r, lam):
        assert_allclose(kn.heat_kernel(Q(n, k, lam * lam * t, lam * r)), lam ** -n * kn.heat_kernel(Q(n, k, t, r)),
                        rtol=1e-10)

    @settings(deadline=None)
    @given(n=dims, k=ks, t=st.floats(0.1, 3.0), f=fracs, lam=lams)
    def test_wave(self, n, k, t, f, lam):
        assert_allclose(kn.wave_kernel(Q(n, k, lam * t, lam * f * t)), lam ** (1 - n) * kn.wave_kernel(Q(n, k, t, f * t)),
                        rtol=1e-10)

    @settings(deadline=None)
    @given(n=dims, k=ks, t=st.floats(0.2, 2.0), seed=st.integers(0, 2 ** 32 - 1))
    def test_symmetry(self, n, k, t, seed):
        rng = np.random.default_rng(seed)
        # |X - Y| < 0.2 <= t keeps both points inside the cone
        X, Y = rng.uniform(-0.03, 0.03, n), rng.uniform(-0.03, 0.03, n)
        for kind in ("heat", "wave"):
            a = v.kernel_field(kind, n, k, Y)(t, X)
            b = v.kernel_field(kind, n, k, X)(t, Y)
            assert a == b

    @settings(deadline=None)
    @given(n=dims, k=ks, t=st.floats(0.1, 3.0), r=st.floats(0.05, 3.0))
    def test_heat_positive_and_decreasing(self, n, k, t, r):
        a, b = kn.heat_kernel(Q(n, k, t, r)), kn.heat_kernel(Q(n, k, t, 1.1 * r))
        assert 0 < b < a


class TestSolvers:
    @slow
    @given(n=st.integers(2, 5), k=ks, t=st.floats(0.1, 1.0), lam=lams)
    def test_heat_scaling(self, n, k, t, lam):
        X = np.full(n, 0.1)
        c = np.linspace(-0.2, 0.2, n)
        a = solve(SolveRequest(Problem.HEAT, n, k, t, X, Gaussian(c, 0.5))).value
        b = solve(SolveRequest(Problem.HEAT, n, k, lam * lam * t, lam * X, Gaussian(lam * c, lam * 0.5))).value
        assert_allclose(b, a, rtol=1e-8)

    @slow
    @given(n=st.integers(2, 5), k=st.floats(0.1, 0.9), t=st.floats(0.1, 1.0), lam=lams)
    def test_wave_scaling(self, n, k, t, lam):
        X = np.full(n, 0.1)
        c = np.linspace(-0.2, 0.2, n)
        a = solve(SolveRequest(Problem.WAVE, n, k, t, X, Gaussian(c, 0.5))).value
        b = solve(SolveRequest(Problem.WAVE, n, k, lam * t, lam * X, Gaussian(lam * c, lam * 0.5))).value
        assert_allclose(b, lam * a, rtol=1e-6, atol=1e-12)

    @slow
    @given(n=st.integers(2, 5), k=st.floats(0.1, 0.9), shift=st.floats(-2, 2), prob=st.sampled_from(list(Problem)))
    def test_translation(self, n, k, shift, prob):
        X = np.full(n, 0.1)
        c = np.linspace(-0.2, 0.2, n)
        s = np.full(n, shift)
        a = solve(SolveRequest(prob, n, k, 0.6, X, Gaussian(c, 0.5))).value
        b = solve(SolveRequest(prob, n, k, 0.6, X + s, Gaussian(c + s, 0.5))).value
        assert_allclose(b, a, rtol=1e-8, atol=1e-14)

    @slow
    @given(n=st.integers(2, 5), alpha=st.floats(-3, 3), beta=st.floats(-3, 3), prob=st.sampled_from(list(Problem)))
    def test_linearity(self, n, alpha, beta, prob):
        X = np.full(n, 0.1)
        f = Gaussian(np.zeros(n), 0.5)
        g = Bump(np.full(n, 0.2), 0.6)
        req = lambda d: solve(SolveRequest(prob, n, 0.4, 0.5, X, d)).value
        combo = req(SumDatum([(alpha, f), (beta, g)]))
        assert_allclose(combo, alpha * req(f) + beta * req(g), rtol=1e-7, atol=1e-10)

    @slow
    @given(n=st.integers(2, 6), k=ks, t=st.floats(0.1, 1.0), gap=st.floats(0.01, 1.0))
    def test_finite_propagation(self, n, k, t, gap):
        R = 0.3
        X = np.zeros(n)
        X[0] = t + R + gap
        res = solve(SolveRequest(Problem.WAVE, n, k, t, X, Bump(np.zeros(n), R)))
        assert res.value == 0.0


class TestSpecialFunctions:
    @given(a=st.floats(0.05, 3), b=st.floats(0.05, 3), c=st.floats(0.1, 4), z=st.floats(0.0, 0.9))
    def test_euler_transform(self, a, b, c, z):
        lhs = sf.hyp2f1(a, b, c, z)
        rhs = (1 - z) ** (c - a - b) * sf.hyp2f1(c - a, c - b, c, z)
        assert_allclose(lhs, rhs, rtol=1e-9)

    @given(a=st.floats(0.05, 3), c=st.floats(0.1, 4), z=st.floats(0.01, 50))
    def test_kummer_transform(self, a, c, z):
        # U(a, c, z) = z^{1-c} U(a-c+1, 2-c, z) whenever both sides are in range
        if a - c + 1 <= 0 or 2 - c <= 0:
            return
        assert_allclose(sf.hypU(a, c, z), z ** (1 - c) * sf.hypU(a - c + 1, 2 - c, z), rtol=1e-9)

    @given(x=st.floats(0.1, 50))
    def test_gamma_recurrence(self, x):
        assert_allclose(sf.gamma(x + 1), x * sf.gamma(x), rtol=1e-13)
        assert math.isclose(sf.digamma(x + 1), sf.digamma(x) + 1 / x, rel_tol=1e-12, abs_tol=1e-13)
