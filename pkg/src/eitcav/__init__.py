"""Two cavity modes coupled to Lambda atoms near electromagnetically induced transparency.

Steady states, fold and stability analysis, and linearized quantum
fluctuations (squeezing spectra, QND coefficients) in the weak-detuning,
good-cavity limit.
"""
from .continuation import (
    Branch,
    DriftMatrix,
    FoldPoint,
    classify_stability,
    drift_matrix,
    find_turning_point,
    finite_difference_drift,
    solve_steady,
    steady_at,
    sweep_cavity_scan,
    sweep_input_intensity,
    symmetric_state,
)
from .errors import (
    AsymmetryError,
    BadCavityError,
    ConfigError,
    DegenerateSpectrum,
    DomainError,
    NoConvergence,
    SingularInput,
    SingularJacobian,
    SingularMatrix,
)
from .fluctuations import (
    QuadratureSpec,
    ScatteringMatrix,
    SpectraResult,
    best_squeezing,
    qnd_coefficients,
    scattering_matrix,
    spectra,
    squeezing_spectrum,
    worst_squeezing,
)
from .model import (
    ASYMMETRIC_A,
    ASYMMETRIC_B,
    MARGINAL,
    STABLE,
    SYMMETRIC_MINUS,
    SYMMETRIC_PLUS,
    UNSTABLE,
    DriveSpec,
    ModelParams,
    PhaseSet,
    PhysicalParams,
    Polarizations,
    SteadyState,
    analytic_drive,
    analytic_steady_theta0,
    io_phases,
    normalize_params,
    reduced_polarizations,
    steady_residual,
)

__version__ = "0.1.0"
