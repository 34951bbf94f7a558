"""Exception types raised by the analysis routines."""


class LookaheadError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(LookaheadError, ValueError):
    """Invalid hyperparameters or experiment configuration."""


class DimensionMismatch(LookaheadError, ValueError):
    pass


class NotPSD(LookaheadError, ValueError):
    def __init__(self, name, eigenvalue):
        super().__init__(
            f"{name} is not positive semi-definite (min eigenvalue {eigenvalue:.3e})"
        )
        self.name = name
        self.eigenvalue = eigenvalue


class NotSymmetric(LookaheadError, ValueError):
    pass


class NotBilinear(LookaheadError, ValueError):
    pass


class NotScalarGame(LookaheadError, ValueError):
    pass


class InvalidK(ConfigError):
    pass


class InvalidOrder(ConfigError):
    pass


class DegenerateLeadingCoefficient(LookaheadError, ValueError):
    pass


class Unsatisfiable(LookaheadError):
    """A convergence condition fails even for a vanishing step size."""
