"""Exception types. All input rejections derive from ``ValueError``."""


class DimensionError(ValueError):
    """Shapes disagree, or a composite dimension exceeds ``MAX_DIM``."""


class NotHermitianError(ValueError):
    def __init__(self, residual):
        super().__init__(f"matrix is not Hermitian (max |m - m^dag| = {residual:.3e})")
        self.residual = residual


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class InvalidStateError(ValueError):
    """A candidate density matrix violates one of its invariants.

    ``invariant`` is one of ``"hermitian"``, ``"trace"``, ``"positive"``,
    ``"finite"``; ``residual`` is the size of the violation.
    """

    def __init__(self, invariant, residual, detail=""):
        msg = f"invalid state: {invariant} violated, residual {residual:.3e}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.invariant = invariant
        self.residual = residual


class PreconditionError(ValueError):
    def __init__(self, message, residual=None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual
