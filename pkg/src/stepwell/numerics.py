"""Quadrature and convolution engine shared by all propagators.

Two levels of machinery live here:

* adaptive scalar integrators (``oscillatory_integral``,
  ``convolve_with_kernel``, ``momentum_integral``) built on scipy's QUADPACK,
  each returning a value together with an achieved-error estimate;
* exact closed forms and fixed Gauss-Legendre node sets used by the
  propagators when evaluating whole grids at once.  Gaussian packets never
  need numerical spatial quadrature: every kernel integral against a Gaussian
  is a Gaussian-times-quadratic-phase integral with a closed form.

The time-convolution integrand carries a 1/sqrt(t - tau) structure near
tau = t; the substitution tau = t - sigma^2 removes it before quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import quad

from .errors import AccuracyFailure, InvalidArgument
from .packets import GaussianPacket, MomentumAmplitude
from .units import SeriesPolicy, UnitSystem

SQRT_I = np.exp(1j * math.pi / 4.0)  # principal sqrt(i)


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdiv: int = 2000

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise InvalidArgument("tolerances must be positive")
        if self.max_subdiv < 8:
            raise InvalidArgument("max_subdiv must be >= 8")


class IntegralResult(NamedTuple):
    value: complex
    error: float


@lru_cache(maxsize=64)
def gauss_legendre(n: int):
    """Cached Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gl_nodes(a: float, b: float, n: int):
    """Gauss-Legendre nodes and weights mapped to [a, b]."""
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def gaussian_quadratic_integral(A, B, C):
    """integral exp(-A y^2 + B y + C) dy over the real line, Re A > 0.

    Equals sqrt(pi/A) exp(B^2 / (4A) + C) on the principal branch.
    """
    A = np.asarray(A, dtype=complex)
    return np.sqrt(math.pi / A) * np.exp(B * B / (4.0 * A) + C)


def fresnel_gaussian_integral(Q, sign: int, t: float, g: GaussianPacket,
                              u: UnitSystem = UnitSystem()):
    """Free-propagator kernel applied to a Gaussian packet, in closed form.

    Returns (kappa / sqrt(2 pi t i)) * integral exp(i kappa^2 (Q + sign*y)^2
    / (2t)) psi_g(y, 0) dy over the whole line.  ``sign = -1`` with Q = x is
    plain free evolution; ``sign = +1`` produces the image (mirrored) packet
    that all reflection terms are built from.  Vectorized over Q.
    """
    if t <= 0:
        raise InvalidArgument("fresnel_gaussian_integral requires t > 0")
    if sign not in (-1, 1):
        raise InvalidArgument("sign must be +1 or -1")
    Q = np.asarray(Q, dtype=float)
    kap2 = u.kappa**2
    A = 1.0 / (2.0 * g.alpha) - 1j * kap2 / (2.0 * t)
    B = sign * 1j * kap2 * Q / t + g.x0 / g.alpha + 1j * g.p0 / u.hbar
    C = 1j * kap2 * Q * Q / (2.0 * t) - g.x0**2 / (2.0 * g.alpha)
    pref = (math.pi * g.alpha) ** -0.25 * u.kappa / (math.sqrt(2.0 * math.pi * t) * SQRT_I)
    out = pref * gaussian_quadratic_integral(A, B, C)
    return out if out.ndim else complex(out)


def free_gaussian(g: GaussianPacket, t: float, x, u: UnitSystem = UnitSystem()):
    """Freely evolved Gaussian via fresnel closed form (t = 0 allowed)."""
    from .packets import gaussian_position

    if t == 0:
        return gaussian_position(g, x, u)
    return fresnel_gaussian_integral(x, -1, t, g, u)


def oscillatory_integral(kernel: Callable, psi0: Callable, support: tuple[float, float],
                         spec: QuadratureSpec = QuadratureSpec()) -> IntegralResult:
    """Adaptive quadrature of kernel(y) * psi0(y) over a finite support."""
    a, b = support
    val, err = quad(lambda y: kernel(y) * psi0(y), a, b, complex_func=True,
                    epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdiv)
    err = float(abs(err))
    tol = spec.abs_tol + spec.rel_tol * abs(val)
    if err > max(tol, 10 * spec.abs_tol) and err > 1e-3 * abs(val):
        raise AccuracyFailure("oscillatory integral did not converge",
                              best_value=val, error_estimate=err)
    return IntegralResult(val, err)


def convolve_with_kernel(F: Callable, kern: Callable, t: float,
                         spec: QuadratureSpec = QuadratureSpec(),
                         policy: SeriesPolicy | None = None,
                         extend: bool = False) -> IntegralResult:
    """integral_0^t F(t - tau) kern(tau) d tau, optionally extended to infinity.

    The finite part uses the endpoint-regularizing substitution
    tau = t - sigma^2.  ``extend=True`` adds the [t, inf) tail, which only
    makes sense when F is defined for negative arguments (momentum-space
    usage); the policy threshold guards against extending too early.
    """
    if t < 0:
        raise InvalidArgument("convolution requires t >= 0")
    if t == 0 and not extend:
        return IntegralResult(0.0 + 0.0j, 0.0)

    def integrand(sigma):
        return F(sigma * sigma) * kern(t - sigma * sigma) * 2.0 * sigma

    val, err = quad(integrand, 0.0, math.sqrt(t), complex_func=True,
                    epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdiv)
    err = float(abs(err))
    if extend:
        tail, terr = quad(lambda tau: F(t - tau) * kern(tau), t, np.inf,
                          complex_func=True, epsabs=spec.abs_tol,
                          epsrel=spec.rel_tol, limit=spec.max_subdiv)
        val += tail
        err += float(abs(terr))
    tol = spec.abs_tol + spec.rel_tol * abs(val)
    if err > max(tol, 10 * spec.abs_tol) and err > 1e-3 * max(abs(val), 1.0):
        raise AccuracyFailure("convolution did not converge",
                              best_value=val, error_estimate=err)
    return IntegralResult(val, err)


def momentum_integral(f: MomentumAmplitude, weight: Callable, x: float, t: float,
                      spec: QuadratureSpec = QuadratureSpec(),
                      u: UnitSystem = UnitSystem()) -> IntegralResult:
    """(2 pi hbar)^(-1/2) integral e^(-ipx/hbar) e^(-ip^2 t/2m hbar) f(p) weight(p) dp.

    Integrates over the effective support of f (center +- ~10 spreads).
    """
    a, b = f.support(10.0)
    pref = 1.0 / math.sqrt(2.0 * math.pi * u.hbar)

    def integrand(p):
        phase = -1j * (p * x + p * p * t / (2.0 * u.mass)) / u.hbar
        return np.exp(phase) * f(p) * weight(p)

    val, err = quad(integrand, a, b, complex_func=True, epsabs=spec.abs_tol,
                    epsrel=spec.rel_tol, limit=spec.max_subdiv)
    val *= pref
    err = float(abs(err)) * pref
    tol = spec.abs_tol + spec.rel_tol * abs(val)
    if err > max(tol, 10 * spec.abs_tol) and err > 1e-3 * max(abs(val), 1e-6):
        raise AccuracyFailure("momentum integral did not converge",
                              best_value=val, error_estimate=err)
    return IntegralResult(val, err)


def momentum_integral_grid(f: MomentumAmplitude, weight, xs, t: float,
                           u: UnitSystem = UnitSystem(), n_nodes: int | None = None):
    """Vectorized fixed-order version of ``momentum_integral`` over a grid of x.

    ``weight`` may be a callable of p or an array matching the node grid of
    the returned helper; node count is sized from the total phase excursion.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    a, b = f.support(12.0)
    if n_nodes is None:
        xmax = float(np.max(np.abs(xs)))
        phase = (xmax + abs(t) * max(abs(f.p0), f.spread) / u.mass) * (b - a) / u.hbar
        n_nodes = int(min(max(96, 0.7 * phase + 64), 3000))
    p, w = gl_nodes(a, b, n_nodes)
    fw = f(p) * (weight(p) if callable(weight) else weight)
    phase = np.exp(-1j * (np.outer(xs, p) + p * p * t / (2.0 * u.mass)) / u.hbar)
    pref = 1.0 / math.sqrt(2.0 * math.pi * u.hbar)
    return pref * phase @ (fw * w)


def conv_sigma_nodes(t: float, n: int):
    """Nodes for integral_0^t F(t-tau) kern(tau) dtau via tau = t - sigma^2.

    Returns (tau, weights) so that sum_j w_j F(t - tau_j) kern(tau_j)
    approximates the convolution.
    """
    sig, w = gl_nodes(0.0, math.sqrt(t), n)
    return t - sig * sig, 2.0 * sig * w


def conv_node_count(t: float, V: float, E: float, u: UnitSystem = UnitSystem(),
                    n_min: int = 96, n_max: int = 6000) -> int:
    """Node count for kernel convolutions, sized from the phase excursion.

    The reflection kernel oscillates at V/2hbar and the propagated field at
    the kinetic frequency E/hbar; a fixed number of Gauss nodes per radian
    with a safety floor covers both.
    """
    phase = (V + abs(E)) * t / u.hbar
    return int(min(max(n_min, 0.8 * phase + 64), n_max))
