"""Special functions and the inverse-Laplace kernels of the reflection problem.

The central objects are

* ``rho_of_s``     rho(s) = 2 / (1 + sqrt(1 - V/(hbar s i))) - 1,
* ``r_kernel``     r(t)   = J_1(V t / 2 hbar) exp(-i V t / 2 hbar) / (i t),
* ``M_kernel``     M(k,t) = k J_k(V t / 2 hbar) exp(-i V t / 2 hbar) / (i^k t),
* ``L_kernel``     L(k,t) = M(k,t) + M(k+1,t),
* ``reflection_R`` R(p)   = -1 + 2k - 2 sqrt(k(k-1)),  k = p^2 / (2 m V),

where M(k, .) is the inverse Laplace transform of rho(s)^k, so r = M(1, .),
and R(p) = rho(-i p^2 / (2 m hbar)).  Every square root uses the principal
branch (cut on the negative real axis); this makes R real in (0, 1] above the
step and unimodular with negative imaginary part below it.

All functions are pure and accept numpy arrays where it makes sense.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import InvalidArgument, Singularity
from .units import UnitSystem


def erfc_complex(z):
    """Complementary error function on the complex plane.

    Wraps the Faddeeva-based scipy implementation, which evaluates
    erfc(z) = exp(-z^2) erfcx(z) internally and therefore stays accurate
    out to |z| of several tens.  Where the true value itself overflows a
    double (far down the imaginary axis) the result saturates to inf with
    the correct sign instead of going NaN.
    """
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise InvalidArgument("erfc_complex requires finite input")
    with np.errstate(over="ignore", invalid="ignore"):
        out = special.erfc(z)
    return out if out.ndim else complex(out)


def erfc_scaled_product(c, w):
    """Stable evaluation of exp(c) * erfc(w) for complex arrays.

    Combines the exponents analytically, exp(c - w^2) * erfcx(w), so the
    frequent pattern of a huge exponential against a tiny erfc never
    overflows.  For Re w < 0 the reflection erfc(w) = 2 - erfc(-w) is used.
    """
    c = np.asarray(c, dtype=complex)
    w = np.asarray(w, dtype=complex)
    c, w = np.broadcast_arrays(c, w)
    right = w.real >= 0
    wr = np.where(right, w, -w)
    with np.errstate(over="ignore", invalid="ignore"):
        core = np.exp(c - wr * wr) * special.erfcx(wr)
        refl = 2.0 * np.exp(c) - core
    out = np.where(right, core, refl)
    return out if out.ndim else complex(out)


def bessel_j(n, x):
    """Integer-order Bessel function of the first kind."""
    if np.any(np.asarray(n) < 0):
        raise InvalidArgument("bessel_j requires n >= 0")
    return special.jv(n, x)


def rho_of_s(s, V: float, u: UnitSystem = UnitSystem()):
    """Laplace-domain reflection factor rho(s) on the principal branch."""
    s = np.asarray(s, dtype=complex)
    if np.any(s == 0):
        raise Singularity("rho(s) has a branch point at s = 0")
    rad = 1.0 - V / (u.hbar * s * 1j)
    out = 2.0 / (1.0 + np.sqrt(rad)) - 1.0
    return out if out.ndim else complex(out)


def r_kernel(t, V: float, u: UnitSystem = UnitSystem()):
    """Time-domain reflection kernel r(t), the inverse transform of rho(s).

    The removable singularity at t = 0 is replaced by the series limit
    V / (4 hbar i).
    """
    return M_kernel(1, t, V, u)


def M_kernel(k: int, t, V: float, u: UnitSystem = UnitSystem()):
    """Inverse Laplace transform of rho(s)^k.

    M(k,t) = k J_k(V t / 2 hbar) exp(-i V t / 2 hbar) / (i^k t); the t = 0
    limit is V/(4 hbar i) for k = 1 and 0 for k >= 2 (J_k(x) ~ (x/2)^k / k!).
    """
    if k < 1:
        raise InvalidArgument("M_kernel requires k >= 1")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise InvalidArgument("M_kernel requires t >= 0")
    w = V / (2.0 * u.hbar)
    ts = np.where(t == 0.0, 1.0, t)  # placeholder, overwritten below
    with np.errstate(divide="ignore", invalid="ignore"):
        val = k * special.jv(k, w * ts) * np.exp(-1j * w * ts) / (1j**k * ts)
    limit = w / (2j) if k == 1 else 0.0
    out = np.where(t == 0.0, limit, val)
    return out if out.ndim else complex(out)


def L_kernel(k: int, t, V: float, u: UnitSystem = UnitSystem()):
    """Inverse Laplace transform of (rho(s) + 1) rho(s)^k for k >= 1.

    Algebraically (rho + 1) rho^k = rho^k + rho^(k+1), hence M(k) + M(k+1).
    The k = 0 case contains a delta distribution (the constant 1 in the
    Laplace domain); callers treat that term structurally as an unconvolved
    contribution and only ever need the regular part r(t), returned here.
    """
    if k < 0:
        raise InvalidArgument("L_kernel requires k >= 0")
    if k == 0:
        return r_kernel(t, V, u)
    return M_kernel(k, t, V, u) + M_kernel(k + 1, t, V, u)


@dataclass(frozen=True)
class ReflectionCoefficient:
    """Stationary reflection amplitude at the step together with k = p^2/(2mV)."""

    value: complex
    k_ratio: float

    def __post_init__(self):
        if self.k_ratio > 0 and abs(self.value) > 1 + 1e-12:
            raise InvalidArgument("|R| must not exceed 1")


def reflection_R(p, V: float, u: UnitSystem = UnitSystem()):
    """Reflection coefficient R(p) = -1 + 2k - 2 sqrt(k(k-1)), k = p^2/(2mV).

    The principal square root reproduces rho(-i p^2 / (2 m hbar)): R is real
    in (0, 1] for k > 1 and lies on the unit circle with Im R <= 0 for k < 1.
    Returns a ``ReflectionCoefficient`` for scalar p, a complex array for
    array p.
    """
    if V <= 0:
        raise InvalidArgument("reflection_R requires V > 0")
    p = np.asarray(p, dtype=float)
    k = p * p / (2.0 * u.mass * V)
    val = -1.0 + 2.0 * k - 2.0 * np.sqrt(k * (k - 1.0) + 0j)
    if val.ndim:
        return val
    return ReflectionCoefficient(complex(val), float(k))


def reflection_value(p, V: float, u: UnitSystem = UnitSystem()):
    """R(p) as a bare complex number / array (no wrapper)."""
    r = reflection_R(p, V, u)
    return r.value if isinstance(r, ReflectionCoefficient) else r
