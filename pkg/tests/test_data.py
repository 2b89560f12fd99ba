import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

from singkern.data import Bump, Gaussian, GridDatum, RadialPoly, SumDatum, sphere_rule, spherical_mean
from singkern.errors import DomainError
from singkern.kernels import sphere_area


def trapezoid_circle_mean(f, X, r, m=10_000):
    th = 2 * math.pi * np.arange(m) / m
    pts = X + r * np.stack([np.cos(th), np.sin(th)], axis=1)
    return 2 * math.pi / m * float(np.sum(f(pts)))


class TestSphereRule:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_weights_and_second_moments(self, n):
        dirs, w = sphere_rule(n)
        assert_allclose(np.linalg.norm(dirs, axis=1), 1.0, rtol=1e-14)
        assert_allclose(w.sum(), sphere_area(n), rtol=1e-13)
        # int x_i^2 = |S|/n and int x_i x_j = 0
        M = (dirs * w[:, None]).T @ dirs
        assert_allclose(M, np.eye(n) * sphere_area(n) / n, atol=1e-12)

    def test_fourth_moment(self):
        dirs, w = sphere_rule(3)
        assert_allclose(np.dot(w, dirs[:, 2] ** 4), 4 * math.pi / 5, rtol=1e-13)


class TestSphericalMean:
    def test_constant_n3(self):
        one = RadialPoly(np.zeros(3), [1.0])
        for r in (0.0, 0.4, 3.0):
            assert_allclose(spherical_mean(one, np.array([0.2, 0.1, -1.0]), r, 3), 4 * math.pi, rtol=1e-14)

    @pytest.mark.parametrize("n", [2, 5])
    def test_centered_radial(self, n):
        g = Gaussian(np.full(n, 0.3), 0.7, 2.0)
        r = 0.9
        assert_allclose(spherical_mean(g, np.full(n, 0.3), r, n), sphere_area(n) * 2.0 * math.exp(-0.5 * (r / 0.7) ** 2),
                        rtol=1e-14)

    def test_gaussian_n2_trapezoid(self):
        g = Gaussian(np.array([0.4, -0.2]), 0.5)
        X = np.array([-0.1, 0.3])
        for r in (0.05, 0.6, 1.7):
            ref = trapezoid_circle_mean(g, X, r)
            assert_allclose(spherical_mean(g, X, r, 2), ref, rtol=1e-9)

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_gaussian_against_product_rule(self, n):
        g = Gaussian(np.linspace(-0.2, 0.3, n), 0.8)
        X = np.zeros(n)
        dirs, w = sphere_rule(n, 24 if n < 6 else 14)
        for r in (0.01, 0.5, 1.2):
            ref = float(np.dot(w, g(X + r * dirs)))
            assert_allclose(spherical_mean(g, X, r, n), ref, rtol=1e-10)

    def test_bump_against_adaptive(self):
        b = Bump(np.array([0.5, 0.0, 0.0]), 0.6)
        X = np.zeros(3)
        for r in (0.1, 0.5, 0.9, 1.2):
            # |Y - c|^2 = r^2 + d^2 - 2 r d mu on the sphere, n = 3 weight 2 pi dmu
            f = lambda mu: float(b.profile(math.sqrt(max(r * r + 0.25 - r * mu, 0.0))))
            cut = min(max((r * r + 0.25 - 0.36) / r, -1.0), 1.0)
            ref = 2 * math.pi * integrate.quad(f, -1, 1, epsabs=0, epsrel=1e-13, points=[cut])[0]
            assert_allclose(spherical_mean(b, X, r, 3), ref, rtol=1e-10, atol=1e-14)

    def test_bump_outside_support(self):
        b = Bump(np.zeros(2), 0.5)
        assert spherical_mean(b, np.array([2.0, 0.0]), 0.3, 2) == 0.0
        assert b.radial_support(np.array([2.0, 0.0])) == (1.5, 2.5)

    def test_radial_poly_exact(self):
        # mean of |Y|^2 over |Y - X| = r is |S|(|X|^2 + r^2)
        p = RadialPoly(np.zeros(4), [0.0, 1.0])
        X = np.array([0.3, 0.1, -0.2, 0.5])
        r = 0.7
        assert_allclose(spherical_mean(p, X, r, 4), sphere_area(4) * (X @ X + r * r), rtol=1e-14)

    def test_sum_is_linear(self):
        g = Gaussian(np.array([0.1, 0.2, 0.0]), 0.5)
        b = Bump(np.zeros(3), 1.0)
        s = SumDatum([(2.0, g), (-0.5, b)])
        X, r = np.array([0.2, 0.0, 0.1]), 0.4
        assert_allclose(spherical_mean(s, X, r, 3),
                        2 * spherical_mean(g, X, r, 3) - 0.5 * spherical_mean(b, X, r, 3), rtol=1e-14)
        assert s.exact_spherical_mean
        assert_allclose(s(X), 2 * g(X) - 0.5 * b(X))

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            spherical_mean(Gaussian(np.zeros(2)), np.zeros(3), 0.5, 3)

    def test_negative_radius(self):
        with pytest.raises(DomainError):
            spherical_mean(Gaussian(np.zeros(2)), np.zeros(2), -0.5, 2)


class TestData:
    def test_validation(self):
        with pytest.raises(DomainError):
            Gaussian(np.zeros(2), width=0.0)
        with pytest.raises(DomainError):
            Bump(np.zeros(2), radius=-1.0)
        with pytest.raises(DomainError):
            RadialPoly(np.zeros(2), [])
        with pytest.raises(DomainError):
            SumDatum([(1.0, Gaussian(np.zeros(2))), (1.0, Gaussian(np.zeros(3)))])

    def test_bump_values(self):
        b = Bump(np.zeros(2), 2.0, 3.0)
        assert_allclose(b(np.zeros(2)), 3.0)
        assert b(np.array([2.0, 0.0])) == 0.0
        assert b.sup_abs() == 3.0

    def test_grid_interpolates_smooth_function(self, tmp_path):
        x = np.linspace(-1, 1, 41)
        f = lambda a, b: np.exp(-(a ** 2 + 2 * b ** 2))
        A, B = np.meshgrid(x, x, indexing="ij")
        path = tmp_path / "g.csv"
        with open(path, "w") as fh:
            fh.write("x1,x2,value\n")
            for a, b, v in zip(A.ravel(), B.ravel(), f(A, B).ravel()):
                fh.write(f"{float(a)!r},{float(b)!r},{float(v)!r}\n")
        g = GridDatum.from_csv(path)
        assert g.dim == 2
        Y = np.array([[0.13, -0.4], [0.5, 0.55]])
        assert_allclose(g(Y), f(Y[:, 0], Y[:, 1]), rtol=1e-4)
        # the generic sphere rule applies to grid data
        dirs, w = sphere_rule(2)
        X, r = np.array([0.1, 0.0]), 0.3
        assert_allclose(spherical_mean(g, X, r, 2), float(np.dot(w, f(*(X + r * dirs).T))), rtol=1e-4)
        with pytest.raises(DomainError):
            g(np.array([1.5, 0.0]))

    def test_grid_file_errors(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,value\n0,0,1\n")
        with pytest.raises(DomainError):
            GridDatum.from_csv(bad)
        junk = tmp_path / "junk.csv"
        junk.write_text("x1,value\n0,abc\n")
        with pytest.raises(DomainError):
            GridDatum.from_csv(junk)
        holes = tmp_path / "holes.csv"
        holes.write_text("x1,x2,value\n0,0,1\n0,1,1\n1,0,1\n")
        with pytest.raises(DomainError):
            GridDatum.from_csv(holes)

    def test_grid_shape_mismatch(self):
        with pytest.raises(DomainError):
            GridDatum((np.arange(3.0), np.arange(4.0)), np.zeros((4, 3)))
