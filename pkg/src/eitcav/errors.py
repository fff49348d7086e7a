"""Exception types raised by the simulator."""


class EitCavError(Exception):
    """Base class for all package errors."""


class DomainError(EitCavError, ValueError):
    """An argument lies outside the domain of a formula or model."""


class AsymmetryError(DomainError):
    """Physical parameters break the symmetric two-transition configuration."""


class BadCavityError(DomainError):
    """Fluctuation analysis requested outside the adiabatic (good cavity) regime."""


class SingularInput(DomainError):
    """Total intracavity intensity is below the singularity floor."""


class NoConvergence(EitCavError, RuntimeError):
    """Newton iteration or bracketing did not converge."""


class SingularJacobian(NoConvergence):
    """The Newton Jacobian is singular (typically exactly at a fold)."""


class SingularMatrix(EitCavError, ArithmeticError):
    """The resolvent of the drift matrix does not exist at this frequency."""


class DegenerateSpectrum(EitCavError, ArithmeticError):
    """A spectrum in a correlation denominator vanishes."""


class ConfigError(EitCavError, ValueError):
    """Invalid scenario configuration."""
