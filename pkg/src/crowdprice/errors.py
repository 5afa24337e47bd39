"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A scenario/config file or CLI argument set is invalid."""


class SizeError(ValueError):
    """An instance exceeds the size limit of an exact solver."""


class InvariantBreach(RuntimeError):
    """An internal consistency check failed; this is a bug, not bad input."""
