import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from stepwell import (
    AccuracyFailure,
    GaussianPacket,
    InvalidArgument,
    QuadratureSpec,
    UnitSystem,
    convolve_with_kernel,
    free_gaussian,
    fresnel_gaussian_integral,
    gaussian_position,
    momentum_integral,
    momentum_rep,
    oscillatory_integral,
)
from stepwell.numerics import (
    SQRT_I,
    conv_node_count,
    conv_sigma_nodes,
    gaussian_quadratic_integral,
    gl_nodes,
    momentum_integral_grid,
)
from stepwell.oracle import free_gaussian_analytic

U = UnitSystem()


class TestBasics:
    def test_sqrt_i(self):
        assert SQRT_I**2 == pytest.approx(1j)

    def test_gl_nodes_integrate_polynomial(self):
        x, w = gl_nodes(-1.0, 3.0, 12)
        assert np.sum(w * x**7) == pytest.approx((3.0**8 - 1.0) / 8.0)

    def test_quadrature_spec_validation(self):
        with pytest.raises(InvalidArgument):
            QuadratureSpec(rel_tol=0.0)
        with pytest.raises(InvalidArgument):
            QuadratureSpec(max_subdiv=2)


class TestGaussianQuadraticIntegral:
    @pytest.mark.parametrize("A,B,C", [
        (1.0, 0.0, 0.0),
        (0.5 + 2.0j, 1.0 - 1.0j, 0.3j),
        (3.0 - 0.5j, -2.0j, 1.0),
    ])
    def test_matches_quadrature(self, A, B, C):
        import mpmath

        with mpmath.workdps(30):
            ref = complex(mpmath.quad(
                lambda y: mpmath.exp(-A * y * y + B * y + C),
                [-mpmath.inf, -2, 0, 2, mpmath.inf]))
        assert gaussian_quadratic_integral(A, B, C) == pytest.approx(ref, abs=1e-10)


class TestFresnelGaussian:
    def test_matches_direct_quadrature(self):
        g = GaussianPacket(1.0, -3.0, 4.0)
        t, Q, sign = 0.7, 2.0, 1
        kernel = lambda y: (np.exp(1j * (Q + sign * y) ** 2 / (2 * t))
                            * gaussian_position(g, y))
        pref = 1.0 / (math.sqrt(2 * math.pi * t) * SQRT_I)
        ref_r, _ = quad(lambda y: kernel(y).real, -20, 15, limit=800)
        ref_i, _ = quad(lambda y: kernel(y).imag, -20, 15, limit=800)
        got = fresnel_gaussian_integral(Q, sign, t, g, U)
        assert got == pytest.approx(pref * (ref_r + 1j * ref_i), abs=1e-9)

    def test_free_evolution_matches_independent_form(self):
        g = GaussianPacket(2.0, -5.0, 3.0)
        xs = np.linspace(-12, 8, 41)
        got = free_gaussian(g, 0.9, xs, U)
        want = free_gaussian_analytic(g, 0.9, xs, U)
        assert_allclose(got, want, atol=1e-12)

    def test_rejects_bad_args(self):
        g = GaussianPacket(1.0, 0.0, 0.0)
        with pytest.raises(InvalidArgument):
            fresnel_gaussian_integral(1.0, 1, 0.0, g, U)
        with pytest.raises(InvalidArgument):
            fresnel_gaussian_integral(1.0, 2, 1.0, g, U)


class TestOscillatoryIntegral:
    def test_gaussian_times_phase(self):
        res = oscillatory_integral(lambda y: np.exp(3j * y),
                                   lambda y: np.exp(-y * y), (-10.0, 10.0))
        assert res.value == pytest.approx(math.sqrt(math.pi) * math.exp(-9.0 / 4.0),
                                          abs=1e-10)
        assert res.error < 1e-8


class TestConvolution:
    def test_against_plain_quadrature(self):
        # F(u) kern(tau) both smooth; substitution must agree with direct quad
        F = lambda u: np.exp(-2.0 * u) * (1.0 + 0.3j)
        kern = lambda tau: np.cos(3.0 * tau)
        t = 1.3
        ref, _ = quad(lambda tau: F(t - tau) * kern(tau), 0, t, complex_func=True)
        res = convolve_with_kernel(F, kern, t)
        assert res.value == pytest.approx(ref, abs=1e-10)

    def test_endpoint_singularity_handled(self):
        # F ~ 1/sqrt(u) near u = 0 is exactly what the substitution removes
        F = lambda u: 1.0 / math.sqrt(u)
        res = convolve_with_kernel(F, lambda tau: 1.0, 1.0)
        assert res.value == pytest.approx(2.0, abs=1e-9)

    def test_zero_time(self):
        assert convolve_with_kernel(lambda u: 1.0, lambda t: 1.0, 0.0).value == 0.0

    def test_sigma_nodes_reproduce_convolution(self):
        F = lambda u: np.sqrt(u) + 1.0
        kern = lambda tau: np.exp(-tau)
        t = 2.0
        taus, ws = conv_sigma_nodes(t, 60)
        got = sum(w * F(t - tau) * kern(tau) for tau, w in zip(taus, ws))
        ref, _ = quad(lambda tau: F(t - tau) * kern(tau), 0, t)
        assert got == pytest.approx(ref, abs=1e-10)

    def test_node_count_scales_with_phase(self):
        assert conv_node_count(1.0, 10.0, 10.0, U) < conv_node_count(1.0, 1000.0, 10.0, U)
        assert conv_node_count(1e-3, 1.0, 1.0, U) == 96  # floor


class TestMomentumIntegral:
    def test_mirrored_free_evolution_via_momentum_space(self):
        # the e^{-ipx/hbar} sign convention evaluates the reflected
        # (space-mirrored) wave: feeding f(p) reproduces free evolution of
        # the mirror image psi(-x, 0)
        g = GaussianPacket(1.0, -2.0, 3.0)
        f = momentum_rep(g, U)
        x, t = 1.0, 0.8
        res = momentum_integral(f, lambda p: 1.0, x, t, u=U)
        want = free_gaussian_analytic(g, t, -x, U)
        assert res.value == pytest.approx(want, abs=1e-9)

    def test_grid_version_matches_scalar(self):
        g = GaussianPacket(1.0, 0.0, 5.0)
        f = momentum_rep(g, U)
        xs = np.array([-1.0, 0.5, 2.0])
        got = momentum_integral_grid(f, lambda p: p / 5.0, xs, 0.3, U)
        for x, v in zip(xs, got):
            ref = momentum_integral(f, lambda p: p / 5.0, float(x), 0.3, u=U)
            assert v == pytest.approx(ref.value, abs=1e-9)
