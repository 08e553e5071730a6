"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class SeriesCapError(ArithmeticError):
    """A series hit its hard term cap before meeting the tolerance."""


class ConvergenceError(ArithmeticError):
    """A quadrature or iteration failed to reach the requested accuracy."""


class SingularityError(ArithmeticError):
    """The Ermakov envelope approached the rho = 0 singularity."""


class StiffnessError(ArithmeticError):
    """The ODE integrator could not advance (step size underflow)."""


class UndefinedPointError(ArithmeticError):
    """A ratio statistic was requested where its denominator vanishes."""


class LabelMismatchError(ValueError):
    """Two states from different Bargmann-index representations were combined."""


class ConfigError(ValueError):
    """A key-value configuration could not be parsed."""

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field
