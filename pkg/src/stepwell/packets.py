"""Initial wave packets and their momentum-space representations.

The workhorse is the normalized Gaussian

    psi(x, 0) = (pi alpha)^(-1/4) exp(-(x - x0)^2 / (2 alpha)) exp(i p0 x / hbar)

with position uncertainty sqrt(alpha/2) and momentum uncertainty
hbar/sqrt(2 alpha).  Its momentum representation, its shifted variants, and
the momentum-substituted "deformed" packet that describes transmission above
a potential step are all available in closed form; sampled packets fall back
to quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .errors import InvalidArgument, PreconditionViolation
from .units import UnitSystem, WaveField


@dataclass(frozen=True)
class GaussianPacket:
    """Gaussian wave packet with width parameter alpha (a squared length)."""

    alpha: float
    x0: float
    p0: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidArgument("alpha must be positive")

    def dx0(self) -> float:
        return math.sqrt(self.alpha / 2.0)

    def dp0(self, u: UnitSystem = UnitSystem()) -> float:
        return u.hbar / math.sqrt(2.0 * self.alpha)


def gaussian_position(g: GaussianPacket, x, u: UnitSystem = UnitSystem()):
    """psi(x, 0) of a Gaussian packet; unit L2 norm."""
    x = np.asarray(x, dtype=float)
    amp = (math.pi * g.alpha) ** -0.25
    out = amp * np.exp(-((x - g.x0) ** 2) / (2.0 * g.alpha) + 1j * g.p0 * x / u.hbar)
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class MomentumAmplitude:
    """Momentum-space amplitude f(p) with location metadata.

    ``func`` must be vectorized over p.  ``p0`` and ``spread`` describe where
    |f|^2 is concentrated; integration routines use them to pick finite
    supports (center +- ~10 spreads).
    """

    func: Callable[[np.ndarray], np.ndarray]
    p0: float
    spread: float

    def __call__(self, p):
        return self.func(p)

    def support(self, n_sigmas: float = 12.0) -> tuple[float, float]:
        return (self.p0 - n_sigmas * self.spread, self.p0 + n_sigmas * self.spread)


def momentum_rep(packet, u: UnitSystem = UnitSystem()) -> MomentumAmplitude:
    """Fourier transform f(p) = (2 pi hbar)^(-1/2) integral psi(x,0) e^(-ipx/hbar) dx.

    Gaussian packets get the closed form, a Gaussian in p centered at p0 with
    spread hbar/sqrt(2 alpha); a sampled ``WaveField`` is transformed by
    trapezoid quadrature on its own grid.
    """
    if isinstance(packet, GaussianPacket):
        g = packet
        amp = (g.alpha / (math.pi * u.hbar**2)) ** 0.25

        def f(p):
            p = np.asarray(p, dtype=float)
            dp = p - g.p0
            out = amp * np.exp(-g.alpha * dp**2 / (2.0 * u.hbar**2) - 1j * dp * g.x0 / u.hbar)
            return out if out.ndim else complex(out)

        return MomentumAmplitude(f, g.p0, g.dp0(u))

    if isinstance(packet, WaveField):
        xs, amps = packet.xs, packet.amps
        pref = 1.0 / math.sqrt(2.0 * math.pi * u.hbar)

        def f(p):
            p = np.atleast_1d(np.asarray(p, dtype=float))
            phase = np.exp(-1j * np.outer(p, xs) / u.hbar)
            out = pref * np.trapezoid(phase * amps, xs, axis=-1)
            return out if np.asarray(p).ndim else complex(out[0])

        # crude moments from the field itself
        w = np.abs(amps) ** 2
        norm = np.trapezoid(w, xs)
        dpsi = np.gradient(amps, xs)
        p_mean = float(np.trapezoid(np.imag(np.conj(amps) * dpsi), xs).real * u.hbar / norm)
        p2 = float(np.trapezoid(np.abs(dpsi) ** 2, xs) * u.hbar**2 / norm)
        spread = math.sqrt(max(p2 - p_mean**2, 1e-300))
        return MomentumAmplitude(f, p_mean, spread)

    raise InvalidArgument(f"cannot build a momentum representation of {type(packet)!r}")


def shifted_momentum(f: MomentumAmplitude, K: float, p, u: UnitSystem = UnitSystem()):
    """Shifted momentum representation f(K, p) = e^(i p K / hbar) f(p)."""
    p = np.asarray(p, dtype=float)
    out = np.exp(1j * p * K / u.hbar) * f(p)
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class DeformedPacket:
    """Effective initial shape of the packet transmitted above a step.

    Produced by the momentum substitution q = sqrt(p^2 - 2mV).  Its norm is
    lambda = sqrt(1 - 2mV/p0^2) and its mean momentum q0 = sqrt(p0^2 - 2mV);
    ``evolve(x, t)`` is its free time evolution (t = 0 gives the shape
    itself).
    """

    lam: float
    q0: float
    evolve: Callable[[np.ndarray, float], np.ndarray]

    def value(self, y):
        return self.evolve(y, 0.0)


def _below_step_fraction(f: MomentumAmplitude, p_cut: float) -> float:
    lo = min(f.p0 - 14.0 * f.spread, p_cut - 1.0)
    val, _ = quad(lambda p: abs(f(p)) ** 2, lo, p_cut, limit=400)
    return float(val)


def deformed_packet(packet, V: float, u: UnitSystem = UnitSystem()) -> DeformedPacket:
    """Deformed packet for a momentum distribution concentrated above sqrt(2mV).

    Raises ``PreconditionViolation`` (reporting the offending mass fraction)
    when the distribution has weight below the step threshold, because the
    substitution then loses probability.
    """
    p_cut = math.sqrt(2.0 * u.mass * V) if V > 0 else 0.0

    if isinstance(packet, GaussianPacket):
        g = packet
        f = momentum_rep(g, u)
        if V > 0:
            frac = _below_step_fraction(f, p_cut)
            if frac > 1e-6:
                raise PreconditionViolation(
                    "momentum distribution reaches below the step threshold",
                    margins={"below_step_mass": frac},
                )
        if V == 0:
            lam, q0 = 1.0, g.p0
        else:
            lam = math.sqrt(1.0 - 2.0 * u.mass * V / g.p0**2)
            q0 = math.sqrt(g.p0**2 - 2.0 * u.mass * V)
        k0 = g.p0**2 / (2.0 * u.mass * V) if V > 0 else math.inf
        hbar = u.hbar
        amp = lam * (g.alpha / (math.pi * hbar**2)) ** 0.25 / math.sqrt(2.0 * math.pi * hbar)
        quad_term = 1j * g.x0 * lam / (2.0 * hbar * q0 * k0) if np.isfinite(k0) else 0.0

        def evolve(x, t):
            # Gaussian-quadratic integral over q around q0, exact.
            x = np.asarray(x, dtype=float)
            A = g.alpha * lam**2 / (2.0 * hbar**2) + quad_term + 1j * t / (2.0 * u.mass * hbar)
            B = 1j * (x - g.x0 * lam - q0 * t / u.mass) / hbar
            C = (1j * q0 * (x - g.x0 / lam - q0 * t / (2.0 * u.mass)) / hbar
                 + 1j * g.p0 * g.x0 / hbar)
            out = amp * np.sqrt(math.pi / A) * np.exp(B * B / (4.0 * A) + C)
            return out if out.ndim else complex(out)

        return DeformedPacket(lam, q0, evolve)

    if isinstance(packet, MomentumAmplitude):
        f = packet
        if V > 0:
            frac = _below_step_fraction(f, p_cut)
            if frac > 1e-6:
                raise PreconditionViolation(
                    "momentum distribution reaches below the step threshold",
                    margins={"below_step_mass": frac},
                )
        twomV = 2.0 * u.mass * V
        lam = math.sqrt(max(1.0 - twomV / f.p0**2, 0.0))
        q0 = math.sqrt(max(f.p0**2 - twomV, 0.0))
        hbar = u.hbar
        pref = 1.0 / math.sqrt(2.0 * math.pi * hbar)
        q_hi = math.sqrt((f.p0 + 14.0 * f.spread) ** 2 - twomV)

        def evolve(x, t):
            scalar = np.asarray(x).ndim == 0
            x = np.atleast_1d(np.asarray(x, dtype=float))
            out = np.empty(x.shape, dtype=complex)
            for j, xj in enumerate(x):
                def integrand(q):
                    p = math.sqrt(q * q + twomV)
                    phase = 1j * (q * xj / hbar - q * q * t / (2.0 * u.mass * hbar))
                    return np.exp(phase) * f(p) * q / p
                out[j], _ = quad(integrand, 0.0, q_hi, complex_func=True, limit=600)
            out *= pref
            return complex(out[0]) if scalar else out

        return DeformedPacket(lam, q0, evolve)

    raise InvalidArgument(f"cannot deform {type(packet)!r}")
