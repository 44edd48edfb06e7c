"""Time-domain solutions for the three piecewise-constant potentials.

All solutions are built from two ingredients:

* image integrals -- the free propagator applied to the packet or to one of
  its mirror images shifted by multiples of the well width, evaluated in
  closed form for Gaussians;
* kernel convolutions -- the reflection kernels r(t), M(k,t), L(k,t) from
  :mod:`stepwell.specfun` convolved against those image integrals (or, for
  the region beyond the step, against the half-line kernel K(x,p,t)).

Conventions follow the potentials themselves: the infinite well occupies
[0, d], the step sits at x = 0 with the packet incoming from the left, and
the asymmetric well (box with exit) occupies [-d, 0] with the step at x = 0.

Exact propagators are spectrally convergent in the number of convolution
nodes; node counts are sized from the total phase excursion of the
integrands.  Approximate propagators additionally check the peakedness
diagnostics of their validity domain and raise ``PreconditionViolation``
with the measured margins when they do not hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidArgument, PreconditionViolation
from .numerics import (
    SQRT_I,
    QuadratureSpec,
    conv_node_count,
    conv_sigma_nodes,
    free_gaussian,
    fresnel_gaussian_integral,
    gl_nodes,
)
from .packets import (
    DeformedPacket,
    GaussianPacket,
    MomentumAmplitude,
    deformed_packet,
    gaussian_position,
    momentum_rep,
)
from .specfun import (
    L_kernel,
    M_kernel,
    erfc_scaled_product,
    r_kernel,
    reflection_value,
)
from .units import SeriesPolicy, UnitSystem, WaveField


@dataclass(frozen=True)
class StepSolutionMode:
    """Which step-potential solution branch a scenario runs."""

    mode: str  # ExactLeft | ExactRight | ApproxClimb | ApproxForbidden

    def __post_init__(self):
        if self.mode not in ("ExactLeft", "ExactRight", "ApproxClimb", "ApproxForbidden"):
            raise InvalidArgument(f"unknown step solution mode {self.mode!r}")


@dataclass(frozen=True)
class EvanescentProfile:
    """Decay profile of the field inside the classically forbidden region."""

    decay_rate: float  # sqrt(2mV - p0^2) / hbar
    prefactor: complex  # 1 + R(p0)

    def __post_init__(self):
        if not self.decay_rate > 0:
            raise InvalidArgument("decay_rate must be positive")


# ---------------------------------------------------------------------------
# image integrals


def image_integral(psi0, Q, sign: int, t: float, u: UnitSystem = UnitSystem()):
    """(kappa/sqrt(2 pi t i)) integral exp(i kappa^2 (Q + sign*y)^2 / 2t) psi0(y) dy.

    Gaussian packets use the exact closed form over the whole line (their
    support inside the domain makes the extension harmless); sampled fields
    are integrated by trapezoid on their own grid.
    """
    if isinstance(psi0, GaussianPacket):
        return fresnel_gaussian_integral(Q, sign, t, psi0, u)
    if isinstance(psi0, WaveField):
        Q = np.atleast_1d(np.asarray(Q, dtype=float))
        ys, amps = psi0.xs, psi0.amps
        kap2 = u.kappa**2
        phase = np.exp(1j * kap2 * (Q[:, None] + sign * ys[None, :]) ** 2 / (2.0 * t))
        pref = u.kappa / (math.sqrt(2.0 * math.pi * t) * SQRT_I)
        out = pref * np.trapezoid(phase * amps, ys, axis=-1)
        return out if np.asarray(Q).ndim else complex(out[0])
    raise InvalidArgument(f"unsupported packet type {type(psi0)!r}")


def _eval_initial(psi0, x, u: UnitSystem):
    if isinstance(psi0, GaussianPacket):
        return gaussian_position(psi0, x, u)
    if isinstance(psi0, WaveField):
        x = np.asarray(x, dtype=float)
        re = np.interp(x, psi0.xs, psi0.amps.real, left=0.0, right=0.0)
        im = np.interp(x, psi0.xs, psi0.amps.imag, left=0.0, right=0.0)
        return re + 1j * im
    raise InvalidArgument(f"unsupported packet type {type(psi0)!r}")


def _packet_kinematics(psi0, u: UnitSystem):
    if isinstance(psi0, GaussianPacket):
        return psi0.p0, psi0.x0, psi0.dp0(u)
    f = momentum_rep(psi0, u)
    return f.p0, 0.0, f.spread


# ---------------------------------------------------------------------------
# free particle and infinite well


def free_evolve(psi0, t: float, x, u: UnitSystem = UnitSystem()):
    """Free time evolution; closed form for Gaussians, t = 0 returns psi0(x)."""
    if t < 0:
        raise InvalidArgument("free_evolve requires t >= 0")
    if t == 0:
        return _eval_initial(psi0, x, u)
    if isinstance(psi0, GaussianPacket):
        return free_gaussian(psi0, t, x, u)
    return image_integral(psi0, x, -1, t, u)


def mirror_well(psi0, d: float, t: float, x, policy: SeriesPolicy | None = None,
                u: UnitSystem = UnitSystem()):
    """Mirror-image solution of the infinite well on [0, d].

    Direct term plus image packets reflected across both walls:

        psi = I(x,-) - I(x,+) + sum_k [ I(2dk+x,-) - I(2dk+x,+)
                                      + I(2dk-x,+) - I(2dk-x,-) ].
    """
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > d)):
        raise DomainError("mirror_well is defined on [0, d]")
    if t == 0:
        return _eval_initial(psi0, x, u)
    p0, _, _ = _packet_kinematics(psi0, u)
    k_max = policy.k_max if policy is not None else SeriesPolicy.image_count(p0 / u.mass, d, t)

    def I(Q, sgn):
        return image_integral(psi0, Q, sgn, t, u)

    out = I(x, -1) - I(x, +1)
    for k in range(1, k_max + 1):
        out = out + (I(2 * d * k + x, -1) - I(2 * d * k + x, +1)
                     + I(2 * d * k - x, +1) - I(2 * d * k - x, -1))
    return out


# ---------------------------------------------------------------------------
# potential step, x < 0


def step_left_exact(psi0, V: float, t: float, x,
                    spec: QuadratureSpec = QuadratureSpec(),
                    policy: SeriesPolicy | None = None,
                    u: UnitSystem = UnitSystem(),
                    n_tau: int | None = None):
    """Exact solution left of the step: free term + image term convolved with r.

        psi(x,t) = I(x,-,t) + integral_0^t I(x,+,t-tau) r(tau) dtau
    """
    if V <= 0:
        raise InvalidArgument("step height V must be positive")
    x = np.asarray(x, dtype=float)
    if t == 0:
        return _eval_initial(psi0, x, u)
    p0, _, dp = _packet_kinematics(psi0, u)
    E = (abs(p0) + 6 * dp) ** 2 / (2.0 * u.mass)
    if n_tau is None:
        n_tau = conv_node_count(t, V, E, u)
    taus, ws = conv_sigma_nodes(t, n_tau)
    rk = r_kernel(taus, V, u)
    out = image_integral(psi0, x, -1, t, u).astype(complex)
    for tau_j, w_j, r_j in zip(taus, ws, rk):
        out += w_j * r_j * image_integral(psi0, x, +1, t - tau_j, u)
    return out if out.ndim else complex(out)


def step_left_approx(psi0, V: float, t: float, x,
                     spec: QuadratureSpec = QuadratureSpec(),
                     policy: SeriesPolicy | None = None,
                     u: UnitSystem = UnitSystem()):
    """Left-side solution with the reflection convolution replaced by R(p).

    Valid once the classical arrival time dwarfs hbar/V, so the kernel
    integral may run to infinity and becomes the stationary coefficient.
    """
    from .numerics import momentum_integral_grid
    from .units import classical_reflection_time

    policy = policy or SeriesPolicy()
    p0, x0, _ = _packet_kinematics(psi0, u)
    t_R = classical_reflection_time(x0, p0, u)
    margin = t_R * V / u.hbar
    if margin <= policy.conv_extend_threshold:
        raise PreconditionViolation(
            "t_R * V / hbar too small for the extended kernel integral",
            margins={"t_R_V_over_hbar": margin},
        )
    x = np.asarray(x, dtype=float)
    f = momentum_rep(psi0, u)
    free = free_evolve(psi0, t, x, u)
    refl = momentum_integral_grid(f, lambda p: reflection_value(p, V, u), x, t, u)
    out = free + (refl if x.ndim else complex(refl[0]))
    return out


# ---------------------------------------------------------------------------
# potential step, x > 0


def step_kernel_K(x, p, t: float, V: float, u: UnitSystem = UnitSystem()):
    """Half-line kernel K(x, p, t) for the region beyond the step.

    Built from two complementary error functions of combined arguments

        w_pm = -i sqrt(2 m i / hbar t) x/2 -+ i sqrt(i t / 2 hbar m) Z,
        Z    = sqrt(p^2 - 2 m V)  (principal branch),

    each paired with the exponential exp(-+ i x Z / hbar); the pairing is
    evaluated in scaled form so the growing exponential against the decaying
    erfc never overflows.  Broadcasts over an (x, p) outer grid.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))[:, None]
    p = np.atleast_1d(np.asarray(p, dtype=float))[None, :]
    hbar, m = u.hbar, u.mass
    Z = np.sqrt(p * p - 2.0 * m * V + 0j)
    s1 = math.sqrt(2.0 * m / (hbar * t)) * SQRT_I
    s2 = math.sqrt(t / (2.0 * hbar * m)) * SQRT_I
    base = -1j * (V * t / hbar + t * Z * Z / (2.0 * hbar * m))
    xw = -1j * s1 * x / 2.0
    zc = 1j * x * Z / hbar
    term1 = erfc_scaled_product(base - zc, xw - 1j * s2 * Z)
    term2 = erfc_scaled_product(base + zc, xw + 1j * s2 * Z)
    return (term1 + term2) / (2.0 * math.sqrt(2.0 * math.pi * hbar))


def _right_nodes(f: MomentumAmplitude, V: float, xs, t: float, u: UnitSystem,
                 n_p: int | None, shift: float = 0.0):
    """Momentum nodes sized from the phase excursion of the kernel integrand.

    ``shift`` is the largest spatial displacement multiplying p in any
    shifted-packet factor e^{i p K / hbar}; it dominates the node count for
    image series.
    """
    a, b = f.support(10.0)
    if n_p is None:
        xmax = float(np.max(np.abs(xs))) if np.size(xs) else 1.0
        q0 = math.sqrt(max(f.p0**2 - 2.0 * u.mass * V, 0.25 * f.p0**2))
        slope = (t * max(abs(a), abs(b)) / u.mass
                 + xmax * max(abs(f.p0) / q0, 1.0) + abs(shift))
        n_p = int(min(max(96, slope * (b - a) / (1.8 * u.hbar) + 80), 4000))
    return gl_nodes(a, b, n_p)


def step_right_exact(f, V: float, t: float, x,
                     spec: QuadratureSpec = QuadratureSpec(),
                     policy: SeriesPolicy | None = None,
                     u: UnitSystem = UnitSystem(),
                     n_tau: int | None = None, n_p: int | None = None):
    """Exact solution beyond the step from the momentum representation.

        psi(x,t) = integral K(x,p,t) f(p) dp
                 + integral_0^t [integral K(x,p,t-tau) f(p) dp] r(tau) dtau
    """
    if V <= 0:
        raise InvalidArgument("step height V must be positive")
    if isinstance(f, GaussianPacket):
        f = momentum_rep(f, u)
    scalar = np.asarray(x).ndim == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 0):
        raise DomainError("step_right_exact is defined for x >= 0")
    if t <= 0:
        raise InvalidArgument("step_right_exact requires t > 0")
    ps, wp = _right_nodes(f, V, xs, t, u, n_p)
    fw = f(ps) * wp
    out = step_kernel_K(xs, ps, t, V, u) @ fw
    E = (abs(f.p0) + 6 * f.spread) ** 2 / (2.0 * u.mass)
    if n_tau is None:
        n_tau = conv_node_count(t, V, E, u)
    taus, ws = conv_sigma_nodes(t, n_tau)
    rk = r_kernel(taus, V, u)
    for tau_j, w_j, r_j in zip(taus, ws, rk):
        out += (w_j * r_j) * (step_kernel_K(xs, ps, t - tau_j, V, u) @ fw)
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# semiclassical step solutions


def climb_diagnostics(g: GaussianPacket, V: float, u: UnitSystem = UnitSystem()) -> dict:
    """Peakedness margins for the above-step approximation (k0 > 1)."""
    from scipy.stats import norm

    p_cut = math.sqrt(2.0 * u.mass * V)
    dp = g.dp0(u)
    k0 = g.p0**2 / (2.0 * u.mass * V)
    tail = float(norm.cdf((p_cut - g.p0) / dp))
    p_m = g.p0 - 5.0 * dp
    km = p_m**2 / (2.0 * u.mass * V)
    factor = 1.0 / math.sqrt(km - 1.0) if km > 1.0 else math.inf
    return {"k0": k0, "below_step_mass": tail, "edge_factor": factor}


def forbidden_diagnostics(g: GaussianPacket, V: float, u: UnitSystem = UnitSystem()) -> dict:
    """Peakedness margins for the below-step approximation (0 < k0 < 1)."""
    from scipy.stats import norm

    p_cut = math.sqrt(2.0 * u.mass * V)
    dp = g.dp0(u)
    k0 = g.p0**2 / (2.0 * u.mass * V)
    above = float(norm.sf((p_cut - g.p0) / dp))
    below_zero = float(norm.cdf((0.0 - g.p0) / dp))
    p_m = g.p0 + 5.0 * dp
    km = p_m**2 / (2.0 * u.mass * V)
    factor = 1.0 / math.sqrt(1.0 - km) if km < 1.0 else math.inf
    return {"k0": k0, "above_step_mass": above, "negative_mass": below_zero,
            "edge_factor": factor}


def step_climb_approx(g: GaussianPacket, V: float, t: float, x,
                      u: UnitSystem = UnitSystem(), check: bool = True):
    """Semiclassical solution for a packet climbing the step (k0 > 1).

    Left of the step: incoming packet plus R(p0) times the mirror image.
    Beyond it: (1 + R(p0)) times the freely evolving deformed packet, carrying
    the flat-region potential phase e^{-iVt/hbar} on top of its kinetic phase.
    """
    diag = climb_diagnostics(g, V, u)
    if check:
        bad = (diag["k0"] <= 1.0 or diag["below_step_mass"] > 1e-6
               or not (0.2 <= diag["edge_factor"] <= 5.0))
        if bad:
            raise PreconditionViolation("packet not in the climbing regime", margins=diag)
    R0 = reflection_value(g.p0, V, u)
    tilde = deformed_packet(g, V, u)
    scalar = np.asarray(x).ndim == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(xs.shape, dtype=complex)
    left = xs < 0
    if np.any(left):
        xl = xs[left]
        if t == 0:
            out[left] = gaussian_position(g, xl, u) + R0 * gaussian_position(g, -xl, u)
        else:
            out[left] = (free_gaussian(g, t, xl, u)
                         + R0 * fresnel_gaussian_integral(xl, +1, t, g, u))
    if np.any(~left):
        phase = np.exp(-1j * V * t / u.hbar)
        out[~left] = (1.0 + R0) * phase * tilde.evolve(xs[~left], t)
    return complex(out[0]) if scalar else out


def step_forbidden_approx(g: GaussianPacket, V: float, t: float, x,
                          u: UnitSystem = UnitSystem(), check: bool = True):
    """Semiclassical solution for a packet bouncing off a high step (k0 < 1).

    Left of the step the reflected image carries the unimodular R(p0);
    inside the forbidden region the field is evanescent,
    (1 + R(p0)) exp(-sqrt(2mV - p0^2) x / hbar) times a momentum-integral
    factor common to all x.
    """
    diag = forbidden_diagnostics(g, V, u)
    if check:
        bad = (not 0.0 < diag["k0"] < 1.0 or diag["above_step_mass"] > 1e-6
               or diag["negative_mass"] > 1e-6
               or not (0.2 <= diag["edge_factor"] <= 5.0))
        if bad:
            raise PreconditionViolation("packet not in the forbidden regime", margins=diag)
    hbar, m = u.hbar, u.mass
    R0 = reflection_value(g.p0, V, u)
    decay = math.sqrt(2.0 * m * V - g.p0**2) / hbar
    profile = EvanescentProfile(decay, 1.0 + R0)
    # (2 pi hbar)^(-1/2) integral e^{-i p^2 t / 2 m hbar} f(p) dp, closed form
    A = g.alpha / (2.0 * hbar**2) + 1j * t / (2.0 * m * hbar)
    B = -1j * (g.x0 + g.p0 * t / m) / hbar
    C = -1j * g.p0**2 * t / (2.0 * m * hbar)
    amp = (g.alpha / (math.pi * hbar**2)) ** 0.25 / math.sqrt(2.0 * math.pi * hbar)
    factor = amp * np.sqrt(math.pi / A) * np.exp(B * B / (4.0 * A) + C)
    scalar = np.asarray(x).ndim == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(xs.shape, dtype=complex)
    left = xs < 0
    if np.any(left):
        xl = xs[left]
        if t == 0:
            out[left] = gaussian_position(g, xl, u) + R0 * gaussian_position(g, -xl, u)
        else:
            out[left] = (free_gaussian(g, t, xl, u)
                         + R0 * fresnel_gaussian_integral(xl, +1, t, g, u))
    out[~left] = profile.prefactor * np.exp(-profile.decay_rate * xs[~left]) * factor
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# asymmetric well (box with exit) on [-d, 0]


def asym_inside_exact(psi0, d: float, V: float, t: float, x,
                      spec: QuadratureSpec = QuadratureSpec(),
                      policy: SeriesPolicy | None = None,
                      u: UnitSystem = UnitSystem(),
                      n_tau: int | None = None):
    """Exact in-box solution: mirror terms and their M(k, .) convolutions.

    The series combines the infinite-well images with reflection-kernel
    convolutions (one M(k) per extra traversal of the box) plus the two
    plain potential-step terms:

        psi = I(x,-,t) + r * I(x,+,.)                      (step terms)
            - sum_k (-1)^k     M(k)   * I(2d(k+1)+x, +)    (k = 0 term bare)
            + sum_k (-1)^(k+1) M(k+1) * I(2d(k+1)+x, -)
            + sum_k (-1)^(k+1) M(k+1) * I(2d(k+1)-x, +)
            - sum_k (-1)^(k+2) M(k+2) * I(2d(k+1)-x, -)
    """
    scalar = np.asarray(x).ndim == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any((xs < -d) | (xs > 0)):
        raise DomainError("asym_inside_exact is defined on [-d, 0]")
    if t == 0:
        out = _eval_initial(psi0, xs, u)
        return complex(out[0]) if scalar else out
    p0, _, dp = _packet_kinematics(psi0, u)
    k_max = policy.k_max if policy is not None else SeriesPolicy.image_count(p0 / u.mass, d, t)
    E = (abs(p0) + 6 * dp) ** 2 / (2.0 * u.mass)
    if n_tau is None:
        n_tau = conv_node_count(t, V, E, u)
    taus, ws = conv_sigma_nodes(t, n_tau)
    Mk = {k: M_kernel(k, taus, V, u) for k in range(1, k_max + 3)}
    rk = Mk[1]

    def I(Q, sgn, tt):
        return image_integral(psi0, Q, sgn, tt, u)

    out = I(xs, -1, t) - I(2 * d + xs, +1, t)
    for j, (tau_j, w_j) in enumerate(zip(taus, ws)):
        tt = t - tau_j
        acc = rk[j] * I(xs, +1, tt)
        for k in range(0, k_max + 1):
            sgn_k = (-1.0) ** k
            if k >= 1:
                acc -= sgn_k * Mk[k][j] * I(2 * d * (k + 1) + xs, +1, tt)
            acc -= sgn_k * Mk[k + 1][j] * I(2 * d * (k + 1) + xs, -1, tt)
            acc -= sgn_k * Mk[k + 1][j] * I(2 * d * (k + 1) - xs, +1, tt)
            acc -= sgn_k * Mk[k + 2][j] * I(2 * d * (k + 1) - xs, -1, tt)
        out = out + w_j * acc
    return complex(out[0]) if scalar else out


def asym_outside_exact(f, d: float, V: float, t: float, x,
                       spec: QuadratureSpec = QuadratureSpec(),
                       policy: SeriesPolicy | None = None,
                       u: UnitSystem = UnitSystem(),
                       n_tau: int | None = None, n_p: int | None = None):
    """Exact solution beyond the exit of the box.

    Transmission of the packet and of each of its left-wall echoes:

        psi = sum_k (-1)^k L(k) * [ integral K(x,p,.) e^{+2idkp/hbar}    f(p) dp ]
            - sum_k (-1)^k L(k) * [ integral K(x,p,.) e^{-2id(k+1)p/hbar} f(p) dp ]

    with the k = 0 kernel L(0) = delta + r handled structurally (the delta
    gives the two plain potential-step terms).
    """
    if isinstance(f, GaussianPacket):
        f = momentum_rep(f, u)
    scalar = np.asarray(x).ndim == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 0):
        raise DomainError("asym_outside_exact is defined for x >= 0")
    if t <= 0:
        raise InvalidArgument("asym_outside_exact requires t > 0")
    k_max = policy.k_max if policy is not None else SeriesPolicy.image_count(f.p0 / u.mass, d, t)
    ps, wp = _right_nodes(f, V, xs, t, u, n_p, shift=2.0 * d * (k_max + 1))
    fp = f(ps) * wp
    hbar = u.hbar
    # momentum-space weights of the shifted packet images, columns per term
    cols = []
    signs = []
    for k in range(0, k_max + 1):
        cols.append(np.exp(2j * d * k * ps / hbar) * fp)
        signs.append((-1.0) ** k)
        cols.append(np.exp(-2j * d * (k + 1) * ps / hbar) * fp)
        signs.append(-((-1.0) ** k))
    Vmat = np.stack(cols, axis=1)  # (n_p, 2*(k_max+1))
    signs = np.asarray(signs)

    E = (abs(f.p0) + 6 * f.spread) ** 2 / (2.0 * u.mass)
    if n_tau is None:
        n_tau = conv_node_count(t, V, E, u)
    taus, ws = conv_sigma_nodes(t, n_tau)
    Lk = np.empty((k_max + 1, n_tau), dtype=complex)
    Lk[0] = r_kernel(taus, V, u)
    for k in range(1, k_max + 1):
        Lk[k] = L_kernel(k, taus, V, u)
    # per-column convolution weights: column 2k and 2k+1 share kernel L(k)
    col_kernel = np.repeat(Lk, 2, axis=0)  # (2*(k_max+1), n_tau)

    # delta part of L(0): bare K at time t against the two k = 0 columns
    K_t = step_kernel_K(xs, ps, t, V, u)
    out = signs[0] * (K_t @ Vmat[:, 0]) + signs[1] * (K_t @ Vmat[:, 1])
    for j, (tau_j, w_j) in enumerate(zip(taus, ws)):
        proj = step_kernel_K(xs, ps, t - tau_j, V, u) @ Vmat  # (n_x, n_cols)
        out += w_j * (proj @ (signs * col_kernel[:, j]))
    return complex(out[0]) if scalar else out


def asym_truncation_orders(v0: float, d: float, t: float) -> int:
    """Common truncation order for the semiclassical box series.

    l is the smallest integer with 2 d l >= v0 t + 3 d; orders are l - 1.
    """
    l = max(int(math.ceil((abs(v0) * t + 3.0 * d) / (2.0 * d))), 1)
    return l


def asym_inside_approx(g: GaussianPacket, d: float, V: float, t: float, x,
                       policy: SeriesPolicy | None = None,
                       u: UnitSystem = UnitSystem(), check: bool = True):
    """Semiclassical in-box solution: mirror series weighted by powers of R(p0).

    Each image that has crossed the exit k times carries R(p0)^k.  Validity
    requires the two truncation conditions (slow image leakage, and fast
    kernel decay compared to the number of active terms); their measured
    values are reported on violation.
    """
    scalar = np.asarray(x).ndim == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any((xs < -d) | (xs > 0)):
        raise DomainError("asym_inside_approx is defined on [-d, 0]")
    v0 = g.p0 / u.mass
    l = asym_truncation_orders(v0, d, t)
    cond1 = t * t * u.hbar * math.sqrt(V / u.mass**3) / d**3
    cond2 = (2.0 * u.hbar / (V * t)) ** 0.25 * l * (l - 1) / 2.0 if t > 0 else 0.0
    if check and (cond1 > 0.1 or cond2 > 5.0):
        raise PreconditionViolation(
            "truncation conditions for the semiclassical box series violated",
            margins={"cond1": cond1, "cond2": cond2},
        )
    if t == 0:
        out = gaussian_position(g, xs, u)
        return complex(out[0]) if scalar else out
    if policy is not None:
        L1, L2, L3, L4 = policy.L1, policy.L2, policy.L3, policy.L4
    else:
        L1 = L2 = L3 = L4 = l - 1
    R0 = reflection_value(g.p0, V, u)

    def I(Q, sgn):
        return fresnel_gaussian_integral(Q, sgn, t, g, u)

    out = I(xs, -1) + R0 * I(xs, +1)
    for k in range(0, L1 + 1):
        out -= (-1.0) ** k * R0**k * I(2 * d * (k + 1) + xs, +1)
    for k in range(0, L2 + 1):
        out += (-1.0) ** (k + 1) * R0 ** (k + 1) * I(2 * d * (k + 1) - xs, +1)
    for k in range(0, L3 + 1):
        out += (-1.0) ** (k + 1) * R0 ** (k + 1) * I(2 * d * (k + 1) + xs, -1)
    for k in range(0, L4 + 1):
        out -= (-1.0) ** (k + 2) * R0 ** (k + 2) * I(2 * d * (k + 1) - xs, -1)
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# stitched full-line fields


def step_exact_field(psi0, V: float, t: float, xs,
                     u: UnitSystem = UnitSystem(), **kwargs) -> WaveField:
    """Full-line step solution: left and right exact branches stitched at 0."""
    xs = np.asarray(xs, dtype=float)
    if t == 0:
        return WaveField(0.0, xs, _eval_initial(psi0, xs, u))
    amps = np.empty(xs.shape, dtype=complex)
    left = xs < 0
    amps[left] = step_left_exact(psi0, V, t, xs[left], u=u, **kwargs)
    amps[~left] = step_right_exact(psi0, V, t, xs[~left], u=u, **kwargs)
    return WaveField(t, xs, amps)


def asym_exact_field(psi0, d: float, V: float, t: float, xs,
                     u: UnitSystem = UnitSystem(), **kwargs) -> WaveField:
    """Full-line box-with-exit solution stitched at x = 0."""
    xs = np.asarray(xs, dtype=float)
    if t == 0:
        return WaveField(0.0, xs, _eval_initial(psi0, xs, u))
    amps = np.empty(xs.shape, dtype=complex)
    left = xs < 0
    amps[left] = asym_inside_exact(psi0, d, V, t, xs[left], u=u, **kwargs)
    amps[~left] = asym_outside_exact(psi0, d, V, t, xs[~left], u=u, **kwargs)
    return WaveField(t, xs, amps)
