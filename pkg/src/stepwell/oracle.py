"""Independent reference evolutions for cross-checking the closed forms.

Nothing in this module shares code paths with :mod:`stepwell.propagators`:

* a Crank-Nicolson finite-difference evolver (unconditionally stable,
  norm-preserving to round-off) for arbitrary piecewise-constant potentials;
* the eigenfunction series of the infinite well with closed-form Gaussian
  overlap coefficients;
* the directly-parameterized free Gaussian (width parameter
  beta(t) = alpha + i hbar t / m);
* the exact revival time of the infinite well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import diags, identity
from scipy.sparse.linalg import splu

from .errors import InvalidArgument
from .packets import GaussianPacket, gaussian_position
from .units import AsymmetricWell, InfiniteWell, Step, UnitSystem, WaveField


@dataclass(frozen=True)
class FdGrid:
    """Uniform spatial grid with hard (Dirichlet) walls at both ends.

    The stored points are the interior nodes; the wave function is
    implicitly zero at ``x_min`` and ``x_max``.
    """

    x_min: float
    x_max: float
    dx: float
    dt: float

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise InvalidArgument("x_max must exceed x_min")
        if not (self.dx > 0 and self.dt > 0):
            raise InvalidArgument("dx and dt must be positive")
        if (self.x_max - self.x_min) / self.dx < 8:
            raise InvalidArgument("grid must contain at least 8 cells")

    @property
    def xs(self) -> np.ndarray:
        n = int(round((self.x_max - self.x_min) / self.dx))
        return self.x_min + self.dx * np.arange(1, n)


def potential_on_grid(pot, xs: np.ndarray) -> np.ndarray:
    """Sample a potential description on a grid.

    Accepts the piecewise-constant potential types, a callable, or an array.
    Hard walls are realized by the grid boundary, not by large values here.
    """
    if isinstance(pot, InfiniteWell):
        return np.zeros_like(xs)
    if isinstance(pot, Step):
        return np.where(xs >= 0.0, pot.V, 0.0)
    if isinstance(pot, AsymmetricWell):
        return np.where(xs >= 0.0, pot.V, 0.0)
    if callable(pot):
        return np.asarray(pot(xs), dtype=float)
    arr = np.asarray(pot, dtype=float)
    if arr.shape != xs.shape:
        raise InvalidArgument("potential array must match the grid")
    return arr


def crank_nicolson_evolve(psi0, pot, t_final: float, grid: FdGrid,
                          u: UnitSystem = UnitSystem()) -> WaveField:
    """Evolve an initial state to ``t_final`` with the Cayley scheme.

    (1 + i H dt / 2 hbar) psi_next = (1 - i H dt / 2 hbar) psi; the single LU
    factorization of the tridiagonal operator is reused for every step.  The
    step count rounds t_final / dt to the nearest integer and the effective
    dt is adjusted so the final time is hit exactly.
    """
    xs = grid.xs
    if isinstance(psi0, GaussianPacket):
        psi = np.asarray(gaussian_position(psi0, xs, u), dtype=complex)
    elif isinstance(psi0, WaveField):
        re = np.interp(xs, psi0.xs, psi0.amps.real, left=0.0, right=0.0)
        im = np.interp(xs, psi0.xs, psi0.amps.imag, left=0.0, right=0.0)
        psi = re + 1j * im
    elif callable(psi0):
        psi = np.asarray(psi0(xs), dtype=complex)
    else:
        raise InvalidArgument(f"unsupported initial state {type(psi0)!r}")
    if t_final < 0:
        raise InvalidArgument("t_final must be >= 0")
    if t_final == 0:
        return WaveField(0.0, xs, psi)

    n_steps = max(int(round(t_final / grid.dt)), 1)
    dt = t_final / n_steps
    v = potential_on_grid(pot, xs)
    hbar, m = u.hbar, u.mass
    kin = hbar**2 / (2.0 * m * grid.dx**2)
    n = xs.size
    H = diags([-kin * np.ones(n - 1), 2.0 * kin + v, -kin * np.ones(n - 1)],
              [-1, 0, 1], format="csc")
    eye = identity(n, format="csc")
    lu = splu((eye + 0.5j * dt / hbar * H).tocsc())
    B = (eye - 0.5j * dt / hbar * H).tocsc()
    for _ in range(n_steps):
        psi = lu.solve(B @ psi)
    return WaveField(t_final, xs, psi)


def crank_nicolson_snapshots(psi0, pot, times, grid: FdGrid,
                             u: UnitSystem = UnitSystem()) -> list[WaveField]:
    """Evolve once and return snapshots at each requested time.

    Times must be ascending; each segment is stepped with roughly the grid
    dt (adjusted per segment to land exactly).  The LU factorization is
    rebuilt only when the effective dt changes.
    """
    times = [float(t) for t in times]
    if any(t < 0 for t in times) or sorted(times) != times:
        raise InvalidArgument("times must be non-negative and ascending")
    xs = grid.xs
    if isinstance(psi0, GaussianPacket):
        psi = np.asarray(gaussian_position(psi0, xs, u), dtype=complex)
    elif callable(psi0):
        psi = np.asarray(psi0(xs), dtype=complex)
    else:
        raise InvalidArgument(f"unsupported initial state {type(psi0)!r}")
    v = potential_on_grid(pot, xs)
    hbar, m = u.hbar, u.mass
    kin = hbar**2 / (2.0 * m * grid.dx**2)
    n = xs.size
    H = diags([-kin * np.ones(n - 1), 2.0 * kin + v, -kin * np.ones(n - 1)],
              [-1, 0, 1], format="csc")
    eye = identity(n, format="csc")
    out, t_now = [], 0.0
    lu, B, dt_cur = None, None, None
    for t in times:
        span = t - t_now
        if span > 0:
            n_steps = max(int(round(span / grid.dt)), 1)
            dt = span / n_steps
            if dt_cur is None or abs(dt - dt_cur) > 1e-15 * max(dt, dt_cur):
                lu = splu((eye + 0.5j * dt / hbar * H).tocsc())
                B = (eye - 0.5j * dt / hbar * H).tocsc()
                dt_cur = dt
            for _ in range(n_steps):
                psi = lu.solve(B @ psi)
            t_now = t
        out.append(WaveField(t, xs, psi.copy()))
    return out


def well_eigenfunction(n: int, d: float, x):
    """phi_n(x) = sqrt(2/d) sin(n pi x / d) on [0, d]."""
    if n < 1:
        raise InvalidArgument("eigenfunction index starts at 1")
    return math.sqrt(2.0 / d) * np.sin(n * math.pi * np.asarray(x, dtype=float) / d)


def well_eigenenergy(n: int, d: float, u: UnitSystem = UnitSystem()) -> float:
    """E_n = n^2 pi^2 hbar^2 / (2 m d^2)."""
    return n**2 * math.pi**2 * u.hbar**2 / (2.0 * u.mass * d**2)


def gaussian_well_coefficients(g: GaussianPacket, d: float, n_max: int,
                               u: UnitSystem = UnitSystem()) -> np.ndarray:
    """Overlap coefficients <phi_n | psi_g> for n = 1..n_max, in closed form.

    Uses the whole-line Fourier transform of the Gaussian, exact whenever the
    packet is negligible outside [0, d]:
        psi_hat(k) = integral e^{i k x} psi(x,0) dx
                   = (pi alpha)^{-1/4} sqrt(2 pi alpha)
                     e^{i (k + p0/hbar) x0} e^{-alpha (k + p0/hbar)^2 / 2},
        <phi_n | psi> = sqrt(2/d) [psi_hat(k_n) - psi_hat(-k_n)] / (2i).
    """
    ns = np.arange(1, n_max + 1)
    kn = ns * math.pi / d

    def psi_hat(k):
        kk = k + g.p0 / u.hbar
        return ((math.pi * g.alpha) ** -0.25 * math.sqrt(2.0 * math.pi * g.alpha)
                * np.exp(1j * kk * g.x0 - g.alpha * kk**2 / 2.0))

    return math.sqrt(2.0 / d) * (psi_hat(kn) - psi_hat(-kn)) / 2j


def eigen_sum_infinite_well(g: GaussianPacket, d: float, t: float, x,
                            n_max: int = 400, u: UnitSystem = UnitSystem()):
    """Spectral solution of the infinite well on [0, d] for a Gaussian packet.

        psi(x, t) = sum_n c_n phi_n(x) exp(-i E_n t / hbar)
    """
    x = np.asarray(x, dtype=float)
    c = gaussian_well_coefficients(g, d, n_max, u)
    ns = np.arange(1, n_max + 1)
    En = ns**2 * math.pi**2 * u.hbar**2 / (2.0 * u.mass * d**2)
    phases = c * np.exp(-1j * En * t / u.hbar)
    modes = np.sin(np.outer(x, ns) * math.pi / d) * math.sqrt(2.0 / d)
    out = modes @ phases
    return out if out.ndim else complex(out)


def free_gaussian_analytic(g: GaussianPacket, t: float, x,
                           u: UnitSystem = UnitSystem()):
    """Directly parameterized free Gaussian, beta(t) = alpha + i hbar t / m.

        psi(x,t) = (pi alpha)^{-1/4} sqrt(alpha / beta)
                   exp(i p0 (x - p0 t / 2m) / hbar)
                   exp(-(x - x0 - p0 t / m)^2 / (2 beta))
    """
    x = np.asarray(x, dtype=float)
    hbar, m = u.hbar, u.mass
    beta = g.alpha + 1j * hbar * t / m
    out = ((math.pi * g.alpha) ** -0.25 * np.sqrt(g.alpha / beta)
           * np.exp(1j * g.p0 * (x - g.p0 * t / (2.0 * m)) / hbar
                    - (x - g.x0 - g.p0 * t / m) ** 2 / (2.0 * beta)))
    return out if out.ndim else complex(out)


def revival_time(d: float, u: UnitSystem = UnitSystem()) -> float:
    """Full revival time of the infinite well, 4 m d^2 / (pi hbar).

    Every eigenphase E_n T / hbar = 2 pi n^2 is then a multiple of 2 pi, so
    the state returns exactly to its initial form.
    """
    return 4.0 * u.mass * d**2 / (math.pi * u.hbar)
