"""Unit system, potential descriptions and core value types.

Everything here is immutable after construction and safe to share between
threads.  The default unit system is the natural one (hbar = m = 1), but all
formulas downstream keep hbar and m symbolic, so SI-like values work too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, InvalidArgument


@dataclass(frozen=True)
class UnitSystem:
    """Physical constants of the problem.

    ``kappa = sqrt(mass / hbar)`` is the scale that appears in every free
    propagator kernel; it is derived once and cached.
    """

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise InvalidArgument("hbar and mass must be positive")

    @property
    def kappa(self) -> float:
        return math.sqrt(self.mass / self.hbar)


@dataclass(frozen=True)
class InfiniteWell:
    """Hard walls at x = 0 and x = d; free inside."""

    d: float

    def __post_init__(self):
        if not self.d > 0:
            raise InvalidArgument("well width d must be positive")


@dataclass(frozen=True)
class Step:
    """V(x) = 0 for x < 0, V(x) = V for x >= 0."""

    V: float

    def __post_init__(self):
        if not self.V > 0:
            raise InvalidArgument("step height V must be positive")


@dataclass(frozen=True)
class AsymmetricWell:
    """Hard wall at x = -d, free on (-d, 0), step of height V for x >= 0."""

    d: float
    V: float

    def __post_init__(self):
        if not self.d > 0:
            raise InvalidArgument("well width d must be positive")
        if not self.V > 0:
            raise InvalidArgument("step height V must be positive")


PotentialSpec = InfiniteWell | Step | AsymmetricWell


@dataclass(frozen=True)
class WaveField:
    """Sampled complex wave function on a spatial grid at one time."""

    t: float
    xs: np.ndarray
    amps: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        amps = np.asarray(self.amps, dtype=complex)
        if xs.ndim != 1 or xs.shape != amps.shape:
            raise InvalidArgument("xs and amps must be 1-d arrays of equal length")
        if xs.size >= 2 and not np.all(np.diff(xs) > 0):
            raise InvalidArgument("xs must be strictly increasing")
        if not np.all(np.isfinite(amps.view(float))):
            raise InvalidArgument("amplitudes must be finite")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "amps", amps)

    def norm(self) -> float:
        """Trapezoid-rule L2 norm squared, integral of |psi|^2 dx."""
        return float(np.trapezoid(np.abs(self.amps) ** 2, self.xs))


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation orders and quadrature tolerances for the series solutions.

    ``conv_extend_threshold`` gates the replacement of the finite [0, t]
    kernel convolution by its infinite-horizon form: the extension is only
    allowed once t*V/hbar exceeds the threshold.
    """

    k_max: int = 8
    L1: int = 6
    L2: int = 6
    L3: int = 6
    L4: int = 6
    tau_quad_tol: float = 1e-8
    x_quad_tol: float = 1e-8
    conv_extend_threshold: float = 50.0

    def __post_init__(self):
        for name in ("k_max", "L1", "L2", "L3", "L4"):
            if getattr(self, name) < 0:
                raise InvalidArgument(f"{name} must be >= 0")
        for name in ("tau_quad_tol", "x_quad_tol"):
            v = getattr(self, name)
            if not (0 < v < 1):
                raise InvalidArgument(f"{name} must lie in (0, 1)")

    @staticmethod
    def image_count(v0: float, d: float, t: float) -> int:
        """Number of mirror images within classical reach, plus a safety margin.

        Only images within roughly v0*t/(2d) box lengths contribute; three
        extra terms cover packet spreading.
        """
        return int(math.ceil(abs(v0) * t / (2.0 * d))) + 3

    @classmethod
    def for_well(cls, v0: float, d: float, t: float, **kwargs) -> "SeriesPolicy":
        k = cls.image_count(v0, d, t)
        kwargs.setdefault("k_max", k)
        for name in ("L1", "L2", "L3", "L4"):
            kwargs.setdefault(name, k)
        return cls(**kwargs)


def classical_reflection_time(x0: float, p0: float, u: UnitSystem = UnitSystem()) -> float:
    """Arrival time |x0| m / |p0| of the corresponding classical particle."""
    if p0 == 0:
        raise DegenerateInput("classical reflection time undefined for p0 == 0")
    return abs(x0) * u.mass / abs(p0)
