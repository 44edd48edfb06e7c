import math

import numpy as np
import pytest
from scipy.integrate import quad

from stepwell import (
    FdGrid,
    GaussianPacket,
    InfiniteWell,
    InvalidArgument,
    Step,
    UnitSystem,
    WaveField,
    crank_nicolson_evolve,
    crank_nicolson_snapshots,
    eigen_sum_infinite_well,
    free_gaussian_analytic,
    gaussian_position,
    gaussian_well_coefficients,
    potential_on_grid,
    revival_time,
    well_eigenenergy,
    well_eigenfunction,
)

U = UnitSystem()


class TestFdGrid:
    def test_interior_nodes(self):
        g = FdGrid(0.0, 1.0, 0.1, 0.01)
        assert g.xs.size == 9
        assert g.xs[0] == pytest.approx(0.1)
        assert g.xs[-1] == pytest.approx(0.9)

    def test_validation(self):
        with pytest.raises(InvalidArgument):
            FdGrid(1.0, 0.0, 0.1, 0.01)
        with pytest.raises(InvalidArgument):
            FdGrid(0.0, 1.0, -0.1, 0.01)
        with pytest.raises(InvalidArgument):
            FdGrid(0.0, 1.0, 0.5, 0.01)  # fewer than 8 cells


class TestPotentialOnGrid:
    xs = np.linspace(-2, 2, 9)

    def test_well_is_zero(self):
        assert np.all(potential_on_grid(InfiniteWell(5.0), self.xs) == 0.0)

    def test_step(self):
        v = potential_on_grid(Step(3.0), self.xs)
        assert np.all(v[self.xs < 0] == 0.0)
        assert np.all(v[self.xs >= 0] == 3.0)

    def test_callable_and_array(self):
        v = potential_on_grid(lambda x: x**2, self.xs)
        assert v[0] == pytest.approx(4.0)
        assert np.all(potential_on_grid(v, self.xs) == v)
        with pytest.raises(InvalidArgument):
            potential_on_grid(np.zeros(3), self.xs)


class TestCrankNicolson:
    def test_norm_conserved_to_roundoff(self):
        g = GaussianPacket(1.0, 0.0, 2.0)
        grid = FdGrid(-15.0, 15.0, 0.01, 1e-3)
        fld = crank_nicolson_evolve(g, InfiniteWell(30.0), 1.0, grid)
        assert abs(fld.norm() - 1.0) < 1e-9

    def test_matches_free_gaussian(self):
        g = GaussianPacket(2.0, 0.0, 0.5)
        grid = FdGrid(-12.0, 12.0, 7.8e-4, 4e-4)
        fld = crank_nicolson_evolve(g, InfiniteWell(24.0), 0.5, grid)
        ref = free_gaussian_analytic(g, 0.5, fld.xs, U)
        l2 = math.sqrt(np.trapezoid(np.abs(fld.amps - ref) ** 2, fld.xs))
        assert l2 < 1e-6

    def test_snapshots_match_single_run(self):
        g = GaussianPacket(1.0, -3.0, 4.0)
        grid = FdGrid(-20.0, 20.0, 0.02, 2e-3)
        snaps = crank_nicolson_snapshots(g, Step(8.0), [0.3, 0.6], grid)
        single = crank_nicolson_evolve(g, Step(8.0), 0.6, grid)
        assert np.max(np.abs(snaps[1].amps - single.amps)) < 1e-10
        assert snaps[0].t == 0.3 and snaps[1].t == 0.6

    def test_snapshots_require_ascending_times(self):
        g = GaussianPacket(1.0, 0.0, 1.0)
        grid = FdGrid(-10.0, 10.0, 0.1, 0.01)
        with pytest.raises(InvalidArgument):
            crank_nicolson_snapshots(g, InfiniteWell(20.0), [0.5, 0.2], grid)

    def test_t_zero_returns_initial(self):
        g = GaussianPacket(1.0, 0.0, 1.0)
        grid = FdGrid(-10.0, 10.0, 0.05, 0.01)
        fld = crank_nicolson_evolve(g, InfiniteWell(20.0), 0.0, grid)
        assert np.allclose(fld.amps, gaussian_position(g, fld.xs))

    def test_wavefield_initial_state(self):
        g = GaussianPacket(1.0, 0.0, 1.0)
        ys = np.linspace(-10, 10, 4001)
        fld0 = WaveField(0.0, ys, gaussian_position(g, ys))
        grid = FdGrid(-10.0, 10.0, 0.01, 1e-3)
        a = crank_nicolson_evolve(fld0, InfiniteWell(20.0), 0.2, grid)
        b = crank_nicolson_evolve(g, InfiniteWell(20.0), 0.2, grid)
        assert np.max(np.abs(a.amps - b.amps)) < 1e-7


class TestWellSpectrum:
    d = 20.0

    def test_eigenfunction_orthonormal(self):
        xs = np.linspace(0, self.d, 4001)
        f2 = well_eigenfunction(2, self.d, xs)
        f3 = well_eigenfunction(3, self.d, xs)
        assert np.trapezoid(f2 * f2, xs) == pytest.approx(1.0, abs=1e-8)
        assert np.trapezoid(f2 * f3, xs) == pytest.approx(0.0, abs=1e-8)

    def test_eigenenergy(self):
        assert well_eigenenergy(3, self.d, U) == pytest.approx(
            9 * math.pi**2 / (2 * self.d**2))

    def test_coefficients_match_quadrature(self):
        g = GaussianPacket(1.0, 10.0, 30.0)
        c = gaussian_well_coefficients(g, self.d, 250, U)
        for n in (1, 95, 96, 190):  # k_n ~ p0 at n ~ 191
            re, _ = quad(lambda x: (well_eigenfunction(n, self.d, x)
                                    * gaussian_position(g, x)).real, 0, self.d,
                         limit=400)
            im, _ = quad(lambda x: (well_eigenfunction(n, self.d, x)
                                    * gaussian_position(g, x)).imag, 0, self.d,
                         limit=400)
            assert c[n - 1] == pytest.approx(re + 1j * im, abs=1e-10)

    def test_coefficient_norm(self):
        g = GaussianPacket(1.0, 10.0, 30.0)
        c = gaussian_well_coefficients(g, self.d, 400, U)
        assert np.sum(np.abs(c) ** 2) == pytest.approx(1.0, abs=1e-10)

    def test_index_validation(self):
        with pytest.raises(InvalidArgument):
            well_eigenfunction(0, self.d, 1.0)


class TestRevival:
    def test_revival_time_value(self):
        assert revival_time(20.0, U) == pytest.approx(1600.0 / math.pi)

    def test_spectral_state_revives(self):
        d = 20.0
        g = GaussianPacket(2.0, 10.0, 3.0)
        xs = np.linspace(0, d, 2001)
        a = eigen_sum_infinite_well(g, d, 0.0, xs, 400, U)
        b = eigen_sum_infinite_well(g, d, revival_time(d, U), xs, 400, U)
        assert np.max(np.abs(a - b)) < 1e-10
