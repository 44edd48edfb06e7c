"""Closed-form time evolution of wave packets in piecewise-constant potentials.

The package solves the time-dependent Schroedinger equation for three
one-dimensional scenarios -- the infinite square well, the potential step,
and the box with one permeable wall -- using image-packet series and
reflection-kernel convolutions, together with semiclassical approximations,
an independent finite-difference evolver for cross-checking, and diagnostic
observables.
"""

from .errors import (
    AccuracyFailure,
    ConfigError,
    DegenerateInput,
    DomainError,
    DomainOverrun,
    InvalidArgument,
    PreconditionViolation,
    Singularity,
    StepwellError,
)
from .units import (
    AsymmetricWell,
    InfiniteWell,
    SeriesPolicy,
    Step,
    UnitSystem,
    WaveField,
    classical_reflection_time,
)
from .specfun import (
    L_kernel,
    M_kernel,
    ReflectionCoefficient,
    bessel_j,
    erfc_complex,
    erfc_scaled_product,
    r_kernel,
    reflection_R,
    reflection_value,
    rho_of_s,
)
from .packets import (
    DeformedPacket,
    GaussianPacket,
    MomentumAmplitude,
    deformed_packet,
    gaussian_position,
    momentum_rep,
    shifted_momentum,
)
from .numerics import (
    IntegralResult,
    QuadratureSpec,
    convolve_with_kernel,
    free_gaussian,
    fresnel_gaussian_integral,
    momentum_integral,
    oscillatory_integral,
)
from .propagators import (
    EvanescentProfile,
    StepSolutionMode,
    asym_exact_field,
    asym_inside_approx,
    asym_inside_exact,
    asym_outside_exact,
    free_evolve,
    mirror_well,
    step_climb_approx,
    step_exact_field,
    step_forbidden_approx,
    step_kernel_K,
    step_left_approx,
    step_left_exact,
    step_right_exact,
)
from .oracle import (
    FdGrid,
    crank_nicolson_evolve,
    crank_nicolson_snapshots,
    eigen_sum_infinite_well,
    free_gaussian_analytic,
    gaussian_well_coefficients,
    potential_on_grid,
    revival_time,
    well_eigenenergy,
    well_eigenfunction,
)
from .diagnostics import (
    ObservableReport,
    ReflectionBound,
    asymptotic_reflection_bound,
    box_period,
    box_survival,
    observables,
    time_after_step_reflections,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
