"""Exception hierarchy shared across the package."""


class WcegoError(Exception):
    """Base class for all library errors."""


class DimensionError(WcegoError):
    """Point/design dimensions disagree with the kernel or domain."""


class UnsupportedParameter(WcegoError):
    """A kernel parameter outside the supported closed-form set."""


class IllConditioned(WcegoError):
    """Gram factorization failed at every rung of the jitter ladder."""


class NormBudgetExceeded(WcegoError):
    """Interpolant norm certificate exceeds the ball radius R."""


class RejectionBudgetExhausted(WcegoError):
    """Norm-rejection sampling failed within the attempt cap."""


class SizeOverflow(WcegoError):
    """A requested lattice exceeds the configured size cap."""


class PolicyViolation(WcegoError):
    """A policy emitted a point outside the feasible box."""


class TargetDegenerate(WcegoError):
    """Adversarial target has (numerically) zero posterior deviation."""


class OutOfRegime(WcegoError):
    """Arguments violate the validity regime of a bound (e.g. eps >= R/4)."""


class ConfigError(WcegoError):
    """Invalid or inconsistent experiment configuration."""
