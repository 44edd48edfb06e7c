import math

import numpy as np
import pytest

from stepwell import (
    GaussianPacket,
    InvalidArgument,
    UnitSystem,
    WaveField,
    asymptotic_reflection_bound,
    box_period,
    box_survival,
    gaussian_position,
    momentum_rep,
    observables,
    time_after_step_reflections,
)
from stepwell.oracle import free_gaussian_analytic

U = UnitSystem()


def _gaussian_field(g, t, lo, hi, n=6001):
    xs = np.linspace(lo, hi, n)
    return WaveField(t, xs, free_gaussian_analytic(g, t, xs, U))


class TestObservables:
    def test_free_gaussian_moments(self):
        g = GaussianPacket(1.0, -2.0, 5.0)
        t = 0.6
        rep = observables(_gaussian_field(g, t, -14, 12))
        assert rep.norm == pytest.approx(1.0, abs=1e-8)
        assert rep.mean_x == pytest.approx(g.x0 + g.p0 * t, abs=1e-6)
        assert rep.mean_p == pytest.approx(g.p0, abs=1e-5)
        beta = abs(g.alpha + 1j * t)
        assert rep.sd_x == pytest.approx(math.sqrt(beta**2 / (2 * g.alpha)),
                                         rel=1e-5)
        # central differencing at carrier k ~ 5 biases p^2 by ~(k dx)^2/3
        assert rep.sd_p == pytest.approx(g.dp0(U), rel=1e-2)

    def test_masses_add_to_norm(self):
        g = GaussianPacket(1.0, 0.5, 3.0)
        rep = observables(_gaussian_field(g, 0.0, -10, 11))
        assert rep.left_mass + rep.right_mass == pytest.approx(rep.norm,
                                                               abs=1e-12)

    def test_split_position(self):
        g = GaussianPacket(1.0, 0.0, 0.0)
        rep = observables(_gaussian_field(g, 0.0, -10, 10))
        assert rep.left_mass == pytest.approx(0.5, abs=1e-8)
        # split one sd to the right of center
        rep2 = observables(_gaussian_field(g, 0.0, -10, 10),
                           split_at=g.dx0())
        from scipy.stats import norm
        assert rep2.left_mass == pytest.approx(norm.cdf(1.0), abs=1e-6)

    def test_small_grid_rejected(self):
        with pytest.raises(InvalidArgument):
            observables(WaveField(0.0, np.linspace(0, 1, 4),
                                  np.ones(4, dtype=complex)))


class TestReflectionBound:
    def test_weak_step_bound_vanishes(self):
        f = momentum_rep(GaussianPacket(1.0, -10.0, 30.0), U)
        res = asymptotic_reflection_bound(f, 1e-6, U)
        assert res.bound < 1e-9

    def test_below_threshold_total_reflection(self):
        # k0 = p0^2/(2mV) = 1/4: every momentum in the packet reflects fully
        f = momentum_rep(GaussianPacket(1.0, -10.0, 10.0), U)
        res = asymptotic_reflection_bound(f, 200.0, U)
        assert res.bound == pytest.approx(1.0, abs=1e-10)
        assert res.saturated

    def test_above_threshold_peaked_packet(self):
        # k0 = 1.5: the peaked-packet bound approaches |R(p0)|^2 = (2-sqrt 3)^2
        f = momentum_rep(GaussianPacket(1.0, -10.0, 30.0), U)
        res = asymptotic_reflection_bound(f, 300.0, U)
        want = (2.0 - math.sqrt(3.0)) ** 2
        assert res.bound == pytest.approx(want, rel=0.03)
        assert res.saturated

    def test_invalid_V(self):
        f = momentum_rep(GaussianPacket(1.0, 0.0, 5.0), U)
        with pytest.raises(InvalidArgument):
            asymptotic_reflection_bound(f, 0.0, U)


class TestBoxQuantities:
    def test_survival_initially_one(self):
        g = GaussianPacket(1.0, -10.0, 30.0)
        xs = np.linspace(-20, 5, 4001)
        fld = WaveField(0.0, xs, np.asarray(gaussian_position(g, xs)))
        assert box_survival(fld, 20.0) == pytest.approx(1.0, abs=1e-8)

    def test_survival_requires_positive_d(self):
        fld = _gaussian_field(GaussianPacket(1.0, 0.0, 0.0), 0.0, -5, 5)
        with pytest.raises(InvalidArgument):
            box_survival(fld, -1.0)

    def test_box_period(self):
        assert box_period(20.0, 30.0, U) == pytest.approx(4.0 / 3.0)
        with pytest.raises(InvalidArgument):
            box_period(20.0, 0.0, U)

    def test_reflection_measurement_times(self):
        g = GaussianPacket(1.0, -10.0, 30.0)
        T = box_period(20.0, 30.0, U)  # 4/3
        assert time_after_step_reflections(1, 20.0, g, U) == pytest.approx(
            1.0 / 3.0 + T / 4.0)
        assert time_after_step_reflections(2, 20.0, g, U) == pytest.approx(
            1.0 / 3.0 + T + T / 4.0)
        with pytest.raises(InvalidArgument):
            time_after_step_reflections(0, 20.0, g, U)
        with pytest.raises(InvalidArgument):
            time_after_step_reflections(1, 20.0, GaussianPacket(1.0, -10.0, -3.0), U)
