"""Exception types shared across the package."""


class DataFormatError(ValueError):
    """Raised when an input file (IDX or CSV) violates its format contract."""


class ConfigError(ValueError):
    """Raised when a CLI configuration is malformed or inconsistent."""
