"""Normalized model of two cavity modes driving Lambda atoms near EIT.

All quantities are dimensionless.  Fields are normalized so that
``x_j = sqrt(2) g / gamma_w * <a_j>``, time is measured in units of ``1/kappa``
and cavity detunings in units of ``kappa``.  The atomic polarizations are
eliminated adiabatically and expanded to first order in the atomic detuning
``epsilon``, which makes the steady-state field equations

    (1 + i theta_j) x_j + 2 C p_j(x_1, x_2) - y_j = 0,    p_1 = v, p_2 = w.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import AsymmetryError, DomainError, SingularInput

#: Below this total intensity |x1|^2 + |x2|^2 the polarization expansion is undefined.
INTENSITY_FLOOR = 1e-30

# Branch labels.  States produced by continuation from an arbitrary guess are
# labelled ``continued_label(n)``.
SYMMETRIC_PLUS = "SymmetricPlus"
SYMMETRIC_MINUS = "SymmetricMinus"
SYMMETRIC_LOW = "SymmetricLow"
ASYMMETRIC_A = "AsymmetricA"
ASYMMETRIC_B = "AsymmetricB"
BRANCH_ORDER = (SYMMETRIC_PLUS, SYMMETRIC_MINUS, SYMMETRIC_LOW, ASYMMETRIC_A, ASYMMETRIC_B)

STABLE = "Stable"
UNSTABLE = "Unstable"
MARGINAL = "Marginal"


def continued_label(ident: int) -> str:
    return f"Continued({ident})"


def is_symmetric_label(label: str) -> bool:
    return label.startswith("Symmetric")


@dataclass(frozen=True)
class ModelParams:
    """Normalized constants of one symmetric configuration.

    ``cooperativity = 0`` is accepted and describes the empty (atom-free) cavity.
    """

    epsilon: float
    cooperativity: float
    theta1: float = 0.0
    theta2: float = 0.0
    gamma_over_kappa: float = 10.0

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise DomainError(f"epsilon must be positive, got {self.epsilon!r}")
        if not (self.cooperativity >= 0 and math.isfinite(self.cooperativity)):
            raise DomainError(f"cooperativity must be >= 0, got {self.cooperativity!r}")
        if not (math.isfinite(self.theta1) and math.isfinite(self.theta2)):
            raise DomainError("cavity detunings must be finite")
        if not self.gamma_over_kappa > 0:
            raise DomainError("gamma_over_kappa must be positive")

    @property
    def thetas(self) -> tuple[float, float]:
        return (self.theta1, self.theta2)

    @property
    def intensity_scale(self) -> float:
        """Factor 4 C epsilon between |x|^2 and the rescaled intensity."""
        return 4.0 * self.cooperativity * self.epsilon

    @property
    def validity_warnings(self) -> list[str]:
        out = []
        if self.gamma_over_kappa < 5:
            out.append(
                f"gamma/kappa = {self.gamma_over_kappa:g} < 5: adiabatic elimination of the atoms is strained"
            )
        if self.epsilon > 0.5:
            out.append(f"epsilon = {self.epsilon:g} > 0.5: first-order expansion in the atomic detuning is strained")
        return out

    @property
    def is_valid(self) -> bool:
        return not self.validity_warnings

    def with_theta(self, theta1: float, theta2: float | None = None) -> ModelParams:
        return replace(self, theta1=theta1, theta2=theta1 if theta2 is None else theta2)


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional parameters (angular frequencies and rates in rad/s)."""

    n_atoms: float
    g1: float
    g2: float
    gamma1: float
    gamma2: float
    kappa1: float
    kappa2: float
    omega1: float
    omega2: float
    omega_a1: float
    omega_a2: float
    omega_c1: float
    omega_c2: float
    transmission1: float
    transmission2: float
    e_in1: complex = 0.0
    e_in2: complex = 0.0


@dataclass(frozen=True)
class DriveSpec:
    """Common input intensity ``Y = |y|^2 / (4 C epsilon)`` and input phases.

    ``amplitude`` overrides the modulus ``|y|`` derived from ``Y``; it is needed
    for the empty cavity (``C = 0``) where ``Y`` is undefined.
    """

    Y: float
    phase1: float = 0.0
    phase2: float = 0.0
    amplitude: float | None = None

    def __post_init__(self):
        if not (self.Y >= 0 and math.isfinite(self.Y)):
            raise DomainError(f"Y must be >= 0, got {self.Y!r}")
        if self.amplitude is not None and self.amplitude < 0:
            raise DomainError("amplitude must be >= 0")

    def input_amplitudes(self, params: ModelParams) -> tuple[complex, complex]:
        if self.amplitude is not None:
            mod = self.amplitude
        else:
            mod = math.sqrt(params.intensity_scale * self.Y)
        return (mod * complex(math.cos(self.phase1), math.sin(self.phase1)),
                mod * complex(math.cos(self.phase2), math.sin(self.phase2)))


@dataclass(frozen=True)
class PhaseSet:
    """Input and output phases of both fields relative to the intracavity fields."""

    phi_in: tuple[float, float]
    phi_out: tuple[float, float]


@dataclass(frozen=True)
class Polarizations:
    v: complex
    w: complex


@dataclass(frozen=True)
class SteadyState:
    """A steady state of the field equations.

    ``phases_in``/``phases_out`` are the arguments of the input/output mean
    fields measured from the argument of the corresponding intracavity field.
    """

    x1: complex
    x2: complex
    I1: float
    I2: float
    phases_in: tuple[float, float]
    phases_out: tuple[float, float]
    branch: str
    stability: str | None = None
    iterations: int = field(default=0, compare=False)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.x1, self.x2], dtype=complex)

    @property
    def intensities(self) -> tuple[float, float]:
        return (self.I1, self.I2)


def make_state(x1: complex, x2: complex, params: ModelParams, drive: DriveSpec | tuple[complex, complex],
               branch: str, stability: str | None = None, iterations: int = 0) -> SteadyState:
    """Build a :class:`SteadyState` from amplitudes, deriving intensities and phases."""
    y = drive.input_amplitudes(params) if isinstance(drive, DriveSpec) else drive
    scale = params.intensity_scale
    xs = (complex(x1), complex(x2))
    if scale > 0:
        I1, I2 = abs(xs[0]) ** 2 / scale, abs(xs[1]) ** 2 / scale
    else:
        I1 = I2 = math.nan
    phin, phout = [], []
    for xj, yj in zip(xs, y):
        ref = np.angle(xj) if xj != 0 else 0.0
        phin.append(float(_wrap(np.angle(yj) - ref)))
        phout.append(float(_wrap(np.angle(2 * xj - yj) - ref)))
    return SteadyState(xs[0], xs[1], I1, I2, tuple(phin), tuple(phout), branch, stability, iterations)


def _wrap(phi: float) -> float:
    return (phi + math.pi) % (2 * math.pi) - math.pi


def normalize_params(p: PhysicalParams, gamma_over_kappa: float | None = None,
                     rtol: float = 1e-9) -> tuple[ModelParams, DriveSpec]:
    """Reduce dimensional parameters to :class:`ModelParams` and :class:`DriveSpec`."""
    rates = (p.gamma1, p.gamma2, p.kappa1, p.kappa2)
    if not all(r > 0 for r in rates) or p.n_atoms <= 0:
        raise DomainError("decay rates and atom number must be strictly positive")
    if not (0 < p.transmission1 <= 1 and 0 < p.transmission2 <= 1):
        raise DomainError("mirror transmissivities must lie in (0, 1]")

    def close(a, b):
        return abs(a - b) <= rtol * max(abs(a), abs(b), 1e-300)

    if not close(p.gamma1, p.gamma2) or not close(p.kappa1, p.kappa2):
        raise AsymmetryError("symmetric scheme requires gamma1 == gamma2 and kappa1 == kappa2")
    if not close(abs(p.g1), abs(p.g2)) or not close(p.transmission1, p.transmission2):
        raise AsymmetryError("symmetric scheme requires equal couplings and transmissivities")

    gamma_w = 0.5 * (p.gamma1 + p.gamma2)
    kappa = p.kappa1
    g = abs(p.g1)
    eps1 = (p.omega_a1 - p.omega1) / gamma_w
    eps2 = (p.omega2 - p.omega_a2) / gamma_w
    if abs(eps1 - eps2) > 1e-9:
        raise AsymmetryError(f"atomic detunings are not opposite: {eps1!r} vs {-eps2!r}")
    if eps1 <= 0:
        raise DomainError("the atomic detuning epsilon must be positive")

    C = g * g * p.n_atoms / (gamma_w * kappa)
    params = ModelParams(
        epsilon=eps1,
        cooperativity=C,
        theta1=(p.omega_c1 - p.omega1) / kappa,
        theta2=(p.omega_c2 - p.omega2) / kappa,
        gamma_over_kappa=gamma_w / kappa if gamma_over_kappa is None else gamma_over_kappa,
    )
    pref = math.sqrt(2.0) * g / gamma_w * 2.0 / math.sqrt(p.transmission1)
    y1, y2 = pref * complex(p.e_in1), pref * complex(p.e_in2)
    if not close(abs(y1), abs(y2)) and (abs(y1) > 0 or abs(y2) > 0):
        raise AsymmetryError("symmetric scheme requires equal input intensities")
    Y = abs(y1) ** 2 / params.intensity_scale
    return params, DriveSpec(Y=Y, phase1=float(np.angle(y1)), phase2=float(np.angle(y2)))


def reduced_polarizations(x1: complex, x2: complex, epsilon: float) -> Polarizations:
    """Steady polarizations to first order in the atomic detuning."""
    n1, n2 = abs(x1) ** 2, abs(x2) ** 2
    total = n1 + n2
    if not total >= INTENSITY_FLOOR:
        raise SingularInput(f"|x1|^2 + |x2|^2 = {total!r} is below the singularity floor")
    d = total * total
    return Polarizations(v=4j * epsilon * x1 * n2 / d, w=-4j * epsilon * x2 * n1 / d)


def steady_residual(state: SteadyState | tuple[complex, complex], params: ModelParams,
                    drive: DriveSpec | tuple[complex, complex]) -> np.ndarray:
    """Residual ``(r1, r2)`` of the steady-state field equations."""
    if isinstance(state, SteadyState):
        x1, x2 = state.x1, state.x2
    else:
        x1, x2 = state
    y1, y2 = drive.input_amplitudes(params) if isinstance(drive, DriveSpec) else drive
    r1 = (1 + 1j * params.theta1) * x1 - y1
    r2 = (1 + 1j * params.theta2) * x2 - y2
    if params.cooperativity != 0:
        pol = reduced_polarizations(x1, x2, params.epsilon)
        r1 += 2 * params.cooperativity * pol.v
        r2 += 2 * params.cooperativity * pol.w
    return np.array([r1, r2], dtype=complex)


def _theta0_intensities(Y: float) -> list[tuple[str, float, float]]:
    if Y < 1:
        eta = math.sqrt(1 - Y * Y)
        hi, lo = 0.5 * Y * (1 + eta), 0.5 * Y * (1 - eta)
        # SymmetricLow has no counterpart in the first-order model: I + 1/(4I) >= 1.
        return [(ASYMMETRIC_A, hi, lo), (ASYMMETRIC_B, lo, hi)]
    if Y == 1:
        return [(SYMMETRIC_PLUS, 0.5, 0.5)]
    root = math.sqrt(1 - 1 / (Y * Y))
    hi, lo = 0.5 * Y * (1 + root), 0.5 * Y * (1 - root)
    return [(SYMMETRIC_PLUS, hi, hi), (SYMMETRIC_MINUS, lo, lo)]


def analytic_steady_theta0(Y: float, params: ModelParams) -> list[SteadyState]:
    """Closed-form steady states at zero cavity detuning.

    Intracavity amplitudes are real and nonnegative; the input phases follow
    from :func:`io_phases`.  The stability tag is the known analytic one.
    """
    if params.theta1 != 0 or params.theta2 != 0:
        raise DomainError("analytic solutions require theta1 == theta2 == 0")
    if not Y > 0:
        raise DomainError(f"Y must be positive, got {Y!r}")
    if params.cooperativity <= 0:
        raise DomainError("analytic solutions require a positive cooperativity")
    scale = params.intensity_scale
    out = []
    for label, I1, I2 in _theta0_intensities(Y):
        if Y == 1:
            stability = MARGINAL
        elif label == SYMMETRIC_MINUS:
            stability = UNSTABLE
        else:
            stability = STABLE
        bare = SteadyState(math.sqrt(scale * I1) + 0j, math.sqrt(scale * I2) + 0j, I1, I2,
                           (0.0, 0.0), (0.0, 0.0), label, stability)
        ph = io_phases(bare)
        out.append(replace(bare, phases_in=ph.phi_in, phases_out=ph.phi_out))
    return out


def analytic_drive(Y: float, state: SteadyState) -> DriveSpec:
    """The drive for which a zero-detuning state with real amplitudes is stationary."""
    return DriveSpec(Y=Y, phase1=state.phases_in[0], phase2=state.phases_in[1])


def io_phases(state: SteadyState) -> PhaseSet:
    """Input/output phases of a zero-detuning state from its intensities."""
    I1, I2 = state.I1, state.I2
    if is_symmetric_label(state.branch):
        if I1 <= 0:
            raise DomainError("symmetric phase formula needs I > 0")
        p1 = math.atan(1 / (2 * I1))
        p2 = -p1
    else:
        if I1 <= 0 or I2 <= 0:
            raise DomainError("asymmetric phase formula needs I1 > 0 and I2 > 0")
        p1 = math.atan(math.sqrt(I2 / I1))
        p2 = -math.atan(math.sqrt(I1 / I2))
    return PhaseSet(phi_in=(p1, p2), phi_out=(-p1, -p2))
