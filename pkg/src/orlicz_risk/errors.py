"""Exception types shared across the package."""


class OrliczRiskError(Exception):
    """Base class for all library errors."""


class StructuralError(OrliczRiskError, ValueError):
    """Shapes or index structures do not fit together (dimension mismatch,
    wrong piece count, non-partition atoms, broken filtration)."""


class ParameterError(OrliczRiskError, ValueError):
    """A numeric parameter is outside its admissible range."""


class ContractError(OrliczRiskError, ValueError):
    """A caller-asserted contract failed a runtime probe (non-linear or
    non-local functional, extended values where finite ones are required,
    non-monotone sequence, axiom violation)."""


class BracketError(OrliczRiskError, RuntimeError):
    """A root or minimum could not be bracketed within the expansion cap."""


class DivergenceError(OrliczRiskError, RuntimeError):
    """A modular or objective never reached its target level."""


class ConvergenceError(OrliczRiskError, RuntimeError):
    """An iterative solve exceeded its iteration budget."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
