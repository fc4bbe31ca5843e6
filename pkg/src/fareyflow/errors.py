"""Exception types shared across the package."""


class FareyFlowError(Exception):
    """Base class for package errors."""


class DomainError(FareyFlowError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConfigurationError(FareyFlowError, ValueError):
    """An unsupported setting, budget or CLI configuration."""


class NumericError(FareyFlowError, ArithmeticError):
    """A numeric routine failed to converge or an exact identity check failed."""
