"""Exception types raised across the package."""


class LiePoissonError(Exception):
    """Base class for package errors."""


class DimensionError(LiePoissonError, ValueError):
    """Operand dimensions do not match the algebra."""


class NotALieAlgebraError(LiePoissonError, ValueError):
    """A structure tensor violates Jacobi's identity beyond tolerance."""


class NotFullyAntisymmetricError(LiePoissonError, ValueError):
    """A mother bracket was required to be fully antisymmetric."""


class DomainError(LiePoissonError, ValueError):
    """A function was evaluated outside its validity domain."""


class EquilibriumError(LiePoissonError, ValueError):
    """A point is not the kind of equilibrium an operation requires."""


class SpectralError(LiePoissonError, RuntimeError):
    """Eigen-solver failure or inconsistent characteristic polynomial."""


class NotSolenoidalError(LiePoissonError, ValueError):
    """A Fourier field is not divergence-free or has a mean component."""
