"""Exception types shared across the package."""


class QubitFlowError(Exception):
    """Base class for package-specific failures."""


class PoleEvaluationError(QubitFlowError):
    """Raised when a field is evaluated exactly at one of its poles."""

    def __init__(self, pole: complex, message: str | None = None):
        self.pole = pole
        super().__init__(message or f"field evaluated at pole z = {pole}")


class ConditioningError(QubitFlowError):
    """Raised when no evaluation point gives an acceptably conditioned basis matrix."""

    def __init__(self, best_alpha: complex, best_condition: float):
        self.best_alpha = best_alpha
        self.best_condition = best_condition
        super().__init__(
            f"no evaluation point with condition <= threshold; best candidate "
            f"alpha = {best_alpha} (condition {best_condition:.3e})"
        )


class RootFindingError(QubitFlowError):
    """Raised when the simultaneous root iteration fails to converge."""
