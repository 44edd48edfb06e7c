"""Observables and probability-flow quantities measured on sampled fields.

Position moments come from trapezoid quadrature; momentum moments from
central differences (the mean from the local phase gradient weighted by
probability, the spread from the derivative field), which works on windows
of a grid and therefore on localized sub-packets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from .errors import AccuracyFailure, InvalidArgument
from .packets import GaussianPacket, MomentumAmplitude
from .specfun import reflection_value
from .units import UnitSystem, WaveField


@dataclass(frozen=True)
class ObservableReport:
    """Scalar observables of one field snapshot.

    ``left_mass``/``right_mass`` split the norm at the requested position;
    they always add up to the norm by construction of the split quadrature.
    """

    t: float
    norm: float
    mean_x: float
    mean_p: float
    sd_x: float
    sd_p: float
    left_mass: float
    right_mass: float


def _split_masses(xs, w, split_at: float):
    """Trapezoid masses of w on xs left/right of split_at, inserting the cut."""
    wl = np.interp(split_at, xs, w)
    left = xs <= split_at
    xs_l = np.append(xs[left], split_at) if xs[left].size and xs[left][-1] < split_at else xs[left]
    w_l = np.append(w[left], wl) if xs_l.size != w[left].size else w[left]
    xs_r = np.insert(xs[~left], 0, split_at) if xs[~left].size and xs[~left][0] > split_at else xs[~left]
    w_r = np.insert(w[~left], 0, wl) if xs_r.size != w[~left].size else w[~left]
    ml = float(np.trapezoid(w_l, xs_l)) if xs_l.size > 1 else 0.0
    mr = float(np.trapezoid(w_r, xs_r)) if xs_r.size > 1 else 0.0
    return ml, mr


def observables(psi: WaveField, split_at: float = 0.0,
                u: UnitSystem = UnitSystem()) -> ObservableReport:
    """Measure norm, position/momentum moments and the mass split of a field."""
    xs, amps = psi.xs, psi.amps
    if xs.size < 5:
        raise InvalidArgument("field grid too small for differencing")
    w = np.abs(amps) ** 2
    norm = float(np.trapezoid(w, xs))
    if not (np.isfinite(norm) and norm > 0):
        raise InvalidArgument("field is not normalizable")
    mean_x = float(np.trapezoid(w * xs, xs)) / norm
    x2 = float(np.trapezoid(w * xs * xs, xs)) / norm
    sd_x = math.sqrt(max(x2 - mean_x**2, 0.0))

    # local momentum from the phase gradient, probability weighted
    span = xs[2:] - xs[:-2]
    phase_step = np.angle(amps[2:] * np.conj(amps[:-2]))
    p_loc = u.hbar * phase_step / span
    mean_p = float(np.trapezoid((w[1:-1] * p_loc), xs[1:-1])) / norm

    # momentum spread from the derivative field
    dpsi = np.empty_like(amps)
    dpsi[1:-1] = (amps[2:] - amps[:-2]) / span
    dpsi[0] = (amps[1] - amps[0]) / (xs[1] - xs[0])
    dpsi[-1] = (amps[-1] - amps[-2]) / (xs[-1] - xs[-2])
    p2 = u.hbar**2 * float(np.trapezoid(np.abs(dpsi) ** 2, xs)) / norm
    sd_p = math.sqrt(max(p2 - mean_p**2, 0.0))

    ml, mr = _split_masses(xs, w, split_at)
    scale = norm / (ml + mr) if ml + mr > 0 else 1.0
    return ObservableReport(psi.t, norm, mean_x, mean_p, sd_x, sd_p,
                            ml * scale, mr * scale)


class ReflectionBound(NamedTuple):
    """Asymptotic reflected-mass bound and whether it is attained."""

    bound: float
    saturated: bool


def asymptotic_reflection_bound(f: MomentumAmplitude, V: float,
                                u: UnitSystem = UnitSystem()) -> ReflectionBound:
    """Long-time bound on the reflected mass, integral |f(p) R(p)|^2 dp.

    The bound is attained (saturated) when the momentum-weighted mirrored
    density integral p |f(-p) R(p)|^2 dp is negative, i.e. when the reflected
    distribution moves leftward as a whole.
    """
    if V <= 0:
        raise InvalidArgument("V must be positive")
    a, b = f.support(12.0)
    lo, hi = min(a, -b), max(b, -a)
    val, err = quad(lambda p: abs(f(p) * reflection_value(p, V, u)) ** 2,
                    lo, hi, limit=500, points=[0.0] if lo < 0 < hi else None)
    if err > 1e-8 + 1e-6 * abs(val):
        raise AccuracyFailure("reflection bound quadrature did not converge",
                              best_value=val, error_estimate=err)
    cond, cerr = quad(lambda p: p * abs(f(-p) * reflection_value(p, V, u)) ** 2,
                      lo, hi, limit=500, points=[0.0] if lo < 0 < hi else None)
    return ReflectionBound(float(val), bool(cond < 0.0))


def box_survival(psi: WaveField, d: float) -> float:
    """Probability mass remaining inside the box [-d, 0]."""
    if not d > 0:
        raise InvalidArgument("d must be positive")
    w = np.abs(psi.amps) ** 2
    ml, _ = _split_masses(psi.xs, w, 0.0)
    inside = (psi.xs >= -d) & (psi.xs <= 0.0)
    if not np.any(inside):
        return 0.0
    return float(np.trapezoid(w[inside], psi.xs[inside]))


def box_period(d: float, p0: float, u: UnitSystem = UnitSystem()) -> float:
    """Classical round-trip time 2 d m / p0 of the box."""
    if p0 == 0:
        raise InvalidArgument("box period undefined for p0 == 0")
    return 2.0 * d * u.mass / abs(p0)


def time_after_step_reflections(m: int, d: float, g: GaussianPacket,
                                u: UnitSystem = UnitSystem()) -> float:
    """A measurement time at which exactly m bounces off the permeable wall
    have occurred and the packet sits mid-box, away from both walls.

    The classical trajectory first reaches the permeable wall at
    |x0| m_mass / p0 and then returns every round trip; a quarter period
    after the m-th bounce the packet crosses the middle of the box.
    """
    if m < 1:
        raise InvalidArgument("m must be >= 1")
    if g.p0 <= 0:
        raise InvalidArgument("packet must move toward the permeable wall")
    T = box_period(d, g.p0, u)
    t_first = abs(g.x0) * u.mass / g.p0
    return t_first + (m - 1) * T + T / 4.0
