"""Closed-form results of the weak-detuning, good-cavity theory.

Nothing here touches the numerical path: the formulas are written out
directly so they can serve as independent ground truth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class OracleReport:
    quantity: str
    formula: str
    analytic: float
    numeric: float

    @property
    def abs_dev(self) -> float:
        return abs(self.numeric - self.analytic)

    @property
    def rel_dev(self) -> float:
        return self.abs_dev / abs(self.analytic) if self.analytic != 0 else self.abs_dev


@dataclass(frozen=True)
class SteadyOracle:
    """Universal intensities.  ``solutions`` holds ``(I1, I2)`` pairs, high-I1 first."""

    Y: float
    eta: float | None
    solutions: tuple[tuple[float, float], ...]


def oracle_steady(Y: float) -> SteadyOracle:
    if not Y > 0:
        raise DomainError("Y must be positive")
    if Y < 1:
        eta = math.sqrt(1 - Y ** 2)
        return SteadyOracle(Y, eta, ((Y / 2 * (1 + eta), Y / 2 * (1 - eta)),
                                     (Y / 2 * (1 - eta), Y / 2 * (1 + eta))))
    if Y == 1:
        return SteadyOracle(Y, 0.0, ((0.5, 0.5),))
    root = math.sqrt(1 - 1 / Y ** 2)
    hi, lo = Y / 2 * (1 + root), Y / 2 * (1 - root)
    return SteadyOracle(Y, None, ((hi, hi), (lo, lo)))


def oracle_sbest(I: float, omega: float) -> float:
    """Best squeezing spectrum on the symmetric branch, ``a = 1/(2I)``."""
    if not I > 0:
        raise DomainError("I must be positive")
    a = 1 / (2 * I)
    return 1 - 4 * a / ((1 + a) ** 2 + omega ** 2)


def oracle_qnd_zero_freq(Y: float) -> tuple[float, float, float]:
    """``(S_int, S_phase, Vsm)`` at zero frequency on the asymmetric branch."""
    if not 0 < Y < 1:
        raise DomainError("Y must lie in (0, 1)")
    eta2 = 1 - Y ** 2
    return 1.0, -3 + 4 / eta2, eta2 / (4 - 3 * eta2)


def oracle_two_photon_drift(I: float, field: int = 1) -> np.ndarray:
    """2x2 fluctuation drift of one field on the symmetric branch, basis (dx, dx*)."""
    if not I > 0:
        raise DomainError("I must be positive")
    if field not in (1, 2):
        raise DomainError("field must be 1 or 2")
    a = (1 / (2 * I)) * (1 if field == 1 else -1)
    return np.array([[-1, 1j * a], [-1j * a, -1]], dtype=complex)
