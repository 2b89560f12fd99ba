import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from singkern.errors import ConvergenceError, DomainError
from singkern.quadrature import QuadratureSpec, Scheme, gauss_converged, gauss_fixed, integrate_1d


def test_linear_default():
    val, err = integrate_1d(lambda z: z, (0, 1))
    assert_allclose(val, 0.5, rtol=1e-15)
    assert err <= 1e-15


def test_jacobi_right_endpoint_weight():
    spec = QuadratureSpec(Scheme.GAUSS_JACOBI, nodes=4, alpha=0.0, beta=-0.5)
    val, _ = integrate_1d(lambda z: 1.0, (0, 1), spec)
    assert_allclose(val, 2.0, rtol=4e-16)


def test_jacobi_left_endpoint_weight():
    # int_0^2 z^{-1/2} (1 + z) dz = 2 sqrt2 + (2/3) 2^{3/2}
    spec = QuadratureSpec(Scheme.GAUSS_JACOBI, nodes=4, alpha=-0.5, beta=0.0)
    val, _ = integrate_1d(lambda z: 1 + z, (0, 2), spec)
    assert_allclose(val, 2 * math.sqrt(2) + 2 / 3 * 2 ** 1.5, rtol=1e-14)


def test_laguerre_half_power():
    spec = QuadratureSpec(Scheme.GAUSS_LAGUERRE, nodes=8, alpha=0.5)
    val, _ = integrate_1d(lambda z: 1.0, (0, math.inf), spec)
    assert_allclose(val, math.gamma(1.5), rtol=1e-14)
    assert_allclose(val, 0.886226925, rtol=1e-9)


def test_laguerre_shifted():
    spec = QuadratureSpec(Scheme.GAUSS_LAGUERRE, nodes=16)
    val, _ = integrate_1d(lambda z: math.cos(z - 1.0), (1.0, math.inf), spec)
    assert_allclose(val, 0.5, rtol=1e-10)


def test_adaptive_infinite():
    spec = QuadratureSpec(Scheme.ADAPTIVE, rel_tol=1e-12)
    val, err = integrate_1d(lambda z: math.exp(-z) * math.sqrt(z), (0, math.inf), spec)
    assert_allclose(val, math.gamma(1.5), rtol=1e-11)
    assert err < 1e-9


def test_doubling_reports_nodes():
    spec = QuadratureSpec(nodes=4, rel_tol=1e-13)
    val, err, nodes = gauss_converged(math.exp, (0, 1), spec)
    assert_allclose(val, math.e - 1, rtol=1e-14)
    assert nodes >= 8
    assert_allclose(gauss_fixed(math.exp, (0, 1), spec, nodes), val, rtol=0, atol=0)


def test_vectorized_matches_scalar():
    f = lambda z: np.sin(3 * z) / (1 + z)
    a = integrate_1d(f, (0, 2), QuadratureSpec(vectorized=True))[0]
    b = integrate_1d(lambda z: math.sin(3 * z) / (1 + z), (0, 2))[0]
    assert_allclose(a, b, rtol=1e-15)


def test_convergence_failure_reports_partial():
    spec = QuadratureSpec(nodes=2, rel_tol=1e-14, max_doublings=0)
    with pytest.raises(ConvergenceError) as info:
        integrate_1d(lambda z: abs(z - 0.3) ** 0.5, (0, 1), spec)
    assert info.value.partial is not None


def test_adaptive_failure():
    spec = QuadratureSpec(Scheme.ADAPTIVE, rel_tol=1e-12, max_subdivisions=2)
    with pytest.raises(ConvergenceError):
        integrate_1d(lambda z: math.sin(50 * z) * abs(z - 0.37) ** 0.3, (0, 1), spec)


def test_non_finite_node_value():
    with pytest.raises(DomainError):
        integrate_1d(lambda z: math.inf, (0, 1))


@pytest.mark.parametrize("kw", [dict(nodes=1), dict(rel_tol=0.0), dict(max_subdivisions=0), dict(alpha=-1.0)])
def test_spec_validation(kw):
    with pytest.raises(DomainError):
        QuadratureSpec(**kw)


def test_interval_checks():
    with pytest.raises(DomainError):
        integrate_1d(lambda z: 1.0, (0, math.inf))
    with pytest.raises(DomainError):
        integrate_1d(lambda z: 1.0, (0, 1), QuadratureSpec(Scheme.GAUSS_LAGUERRE))
    assert integrate_1d(lambda z: 1.0, (2, 2)) == (0.0, 0.0)


def test_with_copy():
    s = QuadratureSpec()
    t = s.with_(nodes=10, scheme="gauss_jacobi")
    assert t.nodes == 10 and t.scheme is Scheme.GAUSS_JACOBI
    assert s.nodes == 64
