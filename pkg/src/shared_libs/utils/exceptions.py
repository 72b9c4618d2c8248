# src/shared_libs/utils/exceptions.py

from typing import Any, Dict, Optional


class QSRLabError(Exception):
    """Base exception for all QSR Lab custom errors."""
    pass


# --- Configuration Errors ---
class ConfigurationError(QSRLabError):
    """Raised when a YAML config cannot be parsed or fails schema validation."""
    pass


# --- Input Errors (cli exit code 2) ---
class InputValidationError(QSRLabError):
    """Base exception for inputs that violate a documented precondition."""
    pass

class DimensionError(InputValidationError):
    """Raised for mismatched register dimensions or when a dimension cap is exceeded."""

    def __init__(self, message: str, required: Optional[int] = None, cap: Optional[int] = None):
        super().__init__(message)
        self.required = required
        self.cap = cap

class ParameterError(InputValidationError):
    """Raised when a scalar parameter (eps, n, b, ...) is outside its admissible range."""
    pass

class ContractViolationError(InputValidationError):
    """Raised when an operator fails a structural contract (e.g. not Hermitian)."""
    pass

class NotPSDError(ContractViolationError):
    """Raised when an operator has a negative eigenvalue beyond the clip tolerance."""

    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue

class SupportViolationError(InputValidationError):
    """Raised when supp(rho) is not contained in supp(sigma) where a check requires it."""
    pass

class StateFileSchemaError(InputValidationError):
    """Raised when a state file does not follow the StateFile schema."""
    pass

class StateFileInvariantError(InputValidationError):
    """Raised when a parsed state violates a state invariant (trace, PSD, norm)."""
    pass

class StateFileDimensionError(InputValidationError):
    """Raised when the declared registers do not match the stored matrix/vector size."""
    pass


# --- Numeric Errors (cli exit code 3) ---
class NumericError(QSRLabError):
    """Raised when a numerically constructed object fails its own post-condition."""

    def __init__(self, message: str, witness: Optional[float] = None):
        super().__init__(message)
        self.witness = witness

class ConvergenceError(NumericError):
    """Raised when an iterative solver hits its iteration cap."""

    def __init__(self, message: str, iterations: int, best_bound: Optional[float] = None,
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(message, witness=best_bound)
        self.iterations = iterations
        self.best_bound = best_bound
        self.details = details or {}
