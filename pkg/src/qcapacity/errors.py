"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands live in Hilbert spaces (or alphabets) of different size."""


class ValidationError(ValueError):
    """An object violates its invariants (normalisation, stochasticity, PSD...)."""


class ConvergenceError(RuntimeError):
    """An iterative solver stopped at its iteration cap.

    ``result`` carries the best estimate reached, so callers can still
    inspect the bounds.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
