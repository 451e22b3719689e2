# src/hetvar/exceptions.py
"""
Custom exceptions for hetvar
"""

class HetVarError(Exception):
    """Base exception for hetvar"""
    pass

class ValidationError(HetVarError):
    """Raised when input validation fails"""
    pass

class DimensionError(ValidationError):
    """Raised when array shapes do not agree with the active model"""
    pass

class DataError(ValidationError):
    """Raised when dataset content is unusable (non-finite cells, duplicate names, ...)"""
    pass

class ConfigurationError(HetVarError):
    """Raised when configuration is invalid"""
    pass

class SolverError(HetVarError):
    """Raised when a numerical step fails (Cholesky failure after jitter)"""
    pass

class FileHandlerError(HetVarError):
    """Raised when file handling fails"""
    pass

class UnsupportedFileTypeError(FileHandlerError):
    """Raised when file type is not supported"""
    pass

class OracleError(HetVarError):
    """Raised when an oracle's preconditions are not met"""
    pass
