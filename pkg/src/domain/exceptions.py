"""Domain exceptions for the NV gyroscope simulator."""

from typing import Optional


class GyroSimulationError(Exception):
    """Base exception for simulation errors."""
    pass


class ConfigurationError(GyroSimulationError):
    """Raised when configuration is invalid."""
    pass


class ValidationError(GyroSimulationError):
    """Raised when data validation fails."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class NumericalError(GyroSimulationError):
    """Raised when a computation produces non-finite or unusable results."""
    pass


class LoopDivergenceError(NumericalError):
    """Raised when the resonance tracking loop diverges."""
    pass


class StorageError(GyroSimulationError):
    """Raised when storage operations fail."""
    pass


class StaleReadingError(GyroSimulationError):
    """Raised when a comagnetometer reading is too old to be used."""
    pass
