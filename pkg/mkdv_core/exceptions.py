"""
Custom exceptions for the mKdV5 numerical laboratory
"""


class MkdvLabError(Exception):
    """Base exception for laboratory errors"""

    pass


class ConfigurationError(MkdvLabError):
    """Exception raised for invalid experiment configuration"""

    pass


class ValidationError(MkdvLabError):
    """Exception raised when an input lies outside an operation's domain"""

    pass


class ScatteringError(MkdvLabError):
    """Exception raised for direct scattering failures"""

    pass


class EvolutionError(MkdvLabError):
    """Exception raised when PDE time stepping fails"""

    pass


class WrapGuardError(EvolutionError):
    """Exception raised when the field reaches the periodic domain edges"""

    pass


class QuadratureError(MkdvLabError):
    """Exception raised for Cauchy-integral evaluations on or near the cut"""

    pass


class SpecialFunctionError(MkdvLabError):
    """Exception raised for log-gamma and parabolic cylinder failures"""

    pass


class StorageError(MkdvLabError):
    """Exception raised for storage-related errors"""

    pass
