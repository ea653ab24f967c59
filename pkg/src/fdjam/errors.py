"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A parameter, configuration entry, or argument violates its contract.

    The message always names the offending field or flag.
    """


class InfeasibleError(RuntimeError):
    """A solver could not bracket a root or the problem has no feasible point.

    The message reports the bracket endpoints (or the offending derived
    quantity) so the caller can see how far the search went.
    """


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach its requested tolerance."""
