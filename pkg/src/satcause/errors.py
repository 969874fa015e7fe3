"""Exception types shared across the package."""


class SatcauseError(Exception):
    """Base class for package errors."""


class SchemaError(SatcauseError):
    """A declared schema does not match the data (missing column, bad spec)."""


class DataError(SatcauseError):
    """Input data violates a contract (bad target label, degenerate group)."""


class ConfigError(SatcauseError):
    """A run configuration is invalid."""
