"""Linearized quantum fluctuations of the output fields.

Vacuum noise enters each mode through a single lossless mirror.  With
``d(da)/dt = A da + sqrt(2) da_in`` and ``da_out = sqrt(2) da - da_in`` the
output fluctuations in the doubled basis are ``da_out(w) = Theta(w) da_in(w)``
with ``Theta(w) = 2 (-i w - A)^-1 - 1``.

A quadrature ``X^phi = a exp(-i phi) + a^dag exp(i phi)`` of field ``j`` is a
linear functional ``c . da``.  Its contribution from the input noise is
described by ``u = Theta^T c`` and for vacuum inputs the symmetrized
cross-spectrum of two such quadratures is ``<A, B> = u_B^dag u_A / 2``.
Coherent light therefore has spectrum 1 (shot noise).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .continuation import DriftMatrix
from .errors import BadCavityError, DegenerateSpectrum, DomainError, SingularMatrix
from .model import UNSTABLE, SteadyState

#: Spectra below this value in a correlation denominator are reported as degenerate.
DENOMINATOR_FLOOR = 1e-14
_COND_LIMIT = 1e14


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature of field ``field`` (1 or 2) at phase ``phi`` relative to the output mean."""

    field: int
    phi: float

    def __post_init__(self):
        if self.field not in (1, 2):
            raise DomainError("field index must be 1 or 2")
        if not math.isfinite(self.phi):
            raise DomainError("quadrature phase must be finite")


@dataclass(frozen=True)
class ScatteringMatrix:
    matrix: np.ndarray
    omega: float


@dataclass
class SpectraResult:
    omega: np.ndarray
    S_best: dict[int, np.ndarray] = field(default_factory=dict)
    phi_star: dict[int, np.ndarray] = field(default_factory=dict)
    S_amp: dict[int, np.ndarray] = field(default_factory=dict)
    Cs: np.ndarray | None = None
    Cm: np.ndarray | None = None
    Vsm: np.ndarray | None = None


def _check_regime(A: DriftMatrix, allow_bad_cavity: bool) -> None:
    if A.params.gamma_over_kappa < 5 and not allow_bad_cavity:
        raise BadCavityError(
            f"gamma/kappa = {A.params.gamma_over_kappa:g} < 5 violates the adiabatic elimination; "
            "pass allow_bad_cavity=True to override"
        )


def scattering_matrix(A: DriftMatrix | np.ndarray, omega: float) -> ScatteringMatrix:
    """Input-output map of the fluctuations at normalized frequency ``omega``."""
    if not math.isfinite(omega):
        raise DomainError("omega must be finite")
    mat = A.matrix if isinstance(A, DriftMatrix) else np.asarray(A, dtype=complex)
    M = -1j * omega * np.eye(4) - mat
    if np.linalg.cond(M) > _COND_LIMIT:
        raise SingularMatrix(f"(-i w - A) is singular at w = {omega!r}; the state is marginal")
    return ScatteringMatrix(2 * np.linalg.inv(M) - np.eye(4), float(omega))


def _selector(j: int, phi_abs: float) -> np.ndarray:
    c = np.zeros(4, dtype=complex)
    c[2 * (j - 1)] = np.exp(-1j * phi_abs)
    c[2 * (j - 1) + 1] = np.exp(1j * phi_abs)
    return c


def output_phase(state: SteadyState, j: int) -> float:
    """Absolute phase of the mean output field ``j`` in the gauge of ``state``."""
    x = state.x1 if j == 1 else state.x2
    return float(np.angle(x)) + state.phases_out[j - 1]


def input_phase(state: SteadyState, j: int) -> float:
    x = state.x1 if j == 1 else state.x2
    return float(np.angle(x)) + state.phases_in[j - 1]


def _bracket(u_a: np.ndarray, u_b: np.ndarray) -> complex:
    return 0.5 * complex(np.vdot(u_b, u_a))


def _prepare(state: SteadyState, A: DriftMatrix, allow_bad_cavity: bool) -> None:
    _check_regime(A, allow_bad_cavity)
    if state.stability == UNSTABLE:
        raise DomainError("fluctuation spectra are only defined around a stable state")


def output_mode(theta: ScatteringMatrix, state: SteadyState, j: int, phi: float) -> np.ndarray:
    """Noise vector of the output quadrature of field ``j`` at relative phase ``phi``."""
    return theta.matrix.T @ _selector(j, output_phase(state, j) + phi)


def input_mode(state: SteadyState, j: int, phi: float = 0.0) -> np.ndarray:
    """Noise vector of the input quadrature of field ``j`` at relative phase ``phi``."""
    return _selector(j, input_phase(state, j) + phi)


def squeezing_spectrum(state: SteadyState, A: DriftMatrix, q: QuadratureSpec, omega: float,
                       allow_bad_cavity: bool = False) -> float:
    """Noise spectrum of an output quadrature, normalized to shot noise."""
    _prepare(state, A, allow_bad_cavity)
    theta = scattering_matrix(A, omega)
    u = output_mode(theta, state, q.field, q.phi)
    return _bracket(u, u).real


def quadrature_covariance(state: SteadyState, A: DriftMatrix, j: int, omega: float,
                          allow_bad_cavity: bool = False) -> np.ndarray:
    """Real 2x2 spectral covariance of the amplitude/phase output quadratures of field ``j``."""
    _prepare(state, A, allow_bad_cavity)
    theta = scattering_matrix(A, omega)
    ux = output_mode(theta, state, j, 0.0)
    up = output_mode(theta, state, j, 0.5 * math.pi)
    M = np.array([[_bracket(ux, ux), _bracket(ux, up)],
                  [_bracket(up, ux), _bracket(up, up)]])
    # S(phi) = n^T M n with n = (cos phi, sin phi); only the symmetric real part contributes.
    return M.real


def best_squeezing(state: SteadyState, A: DriftMatrix, j: int, omega: float,
                   allow_bad_cavity: bool = False) -> tuple[float, float]:
    """Minimal output quadrature noise of field ``j`` and the phase in [0, pi) that attains it."""
    cov = quadrature_covariance(state, A, j, omega, allow_bad_cavity)
    vals, vecs = np.linalg.eigh(cov)
    n = vecs[:, 0]
    phi = math.atan2(n[1], n[0]) % math.pi
    return phi, float(vals[0])


def worst_squeezing(state: SteadyState, A: DriftMatrix, j: int, omega: float,
                    allow_bad_cavity: bool = False) -> tuple[float, float]:
    cov = quadrature_covariance(state, A, j, omega, allow_bad_cavity)
    vals, vecs = np.linalg.eigh(cov)
    n = vecs[:, 1]
    return math.atan2(n[1], n[0]) % math.pi, float(vals[1])


def _corr(a: np.ndarray, b: np.ndarray) -> float:
    aa, bb = _bracket(a, a).real, _bracket(b, b).real
    if aa < DENOMINATOR_FLOOR or bb < DENOMINATOR_FLOOR:
        raise DegenerateSpectrum(f"vanishing spectrum in correlation denominator ({aa:.3e}, {bb:.3e})")
    return abs(_bracket(a, b)) ** 2 / (aa * bb)


def qnd_coefficients(state: SteadyState, A: DriftMatrix, meter: int = 1, omega: float = 0.0,
                     allow_bad_cavity: bool = False) -> tuple[float, float, float]:
    """QND transfer coefficients ``(Cs, Cm, Vsm)`` with ``meter`` measuring the other field.

    The signal is the amplitude quadrature of the other field, the meter
    readout is the phase quadrature of the ``meter`` output.
    """
    if meter not in (1, 2):
        raise DomainError("meter must be 1 or 2")
    signal = 3 - meter
    _prepare(state, A, allow_bad_cavity)
    theta = scattering_matrix(A, omega)
    x_in = input_mode(state, signal)
    x_out = output_mode(theta, state, signal, 0.0)
    y_out = output_mode(theta, state, meter, 0.5 * math.pi)
    Cs = _corr(x_in, x_out)
    Cm = _corr(x_in, y_out)
    Vsm = _bracket(x_out, x_out).real * (1 - _corr(x_out, y_out))
    return Cs, Cm, Vsm


def spectra(state: SteadyState, A: DriftMatrix, omega_grid, fields=(1, 2),
            meter: int | None = None, allow_bad_cavity: bool = False) -> SpectraResult:
    """Squeezing (and optionally QND) spectra over a frequency grid."""
    w = np.asarray(omega_grid, dtype=float)
    res = SpectraResult(omega=w)
    for j in fields:
        best = [best_squeezing(state, A, j, om, allow_bad_cavity) for om in w]
        res.phi_star[j] = np.array([b[0] for b in best])
        res.S_best[j] = np.array([b[1] for b in best])
        res.S_amp[j] = np.array([
            squeezing_spectrum(state, A, QuadratureSpec(j, 0.0), om, allow_bad_cavity) for om in w
        ])
    if meter is not None:
        q = np.array([qnd_coefficients(state, A, meter, om, allow_bad_cavity) for om in w])
        res.Cs, res.Cm, res.Vsm = q[:, 0], q[:, 1], q[:, 2]
    return res
