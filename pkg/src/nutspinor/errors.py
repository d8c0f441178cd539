"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation at a coordinate pole (sin(theta) = 0) of the frame."""


class NonConvergenceError(RuntimeError):
    """A series or adaptive scheme failed to reach its tolerance."""


class TraceViolationError(ValueError):
    """A spinor-valued 1-form fails the trace-free constraint."""
