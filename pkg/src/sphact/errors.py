"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid user-supplied configuration (CLI exit code 2)."""


class NumericalError(RuntimeError):
    """A numerical routine failed or produced non-finite values (CLI exit code 1)."""


class SmoothnessError(ValueError):
    """An operation required more derivative orders than the activation provides."""
