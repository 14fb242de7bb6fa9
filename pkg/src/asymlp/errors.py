"""Exception types shared across the package."""


class SpaceMismatchError(ValueError):
    """A function was used with a measure space it was not defined on."""


class ConfigurationError(ValueError):
    """A run configuration is structurally unusable (bad grid, bad flags)."""


class VerificationError(RuntimeError):
    """An internally constructed certificate failed re-verification.

    This signals a bug in the quantitative chain used to build the
    certificate, never a property of the input data, so it is raised
    loudly instead of being folded into a verdict.
    """
