"""Error hierarchy for the OAM transcoder simulator."""

from typing import Dict, Optional


class TranscoderError(Exception):
    """
    Base class for all simulator errors.

    Args:
        message: Human readable description
        field: Dotted name of the offending parameter, if any
    """

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.field = field

    def to_dict(self) -> Dict:
        """Machine-readable form written to error.json by the CLI."""
        return {
            'error': self.__class__.__name__,
            'message': self.message,
            'field': self.field,
        }


class ValidationError(TranscoderError, ValueError):
    """Invalid labels, amplitudes or parameter values."""


class ConfigError(TranscoderError):
    """Run file could not be parsed or violates the schema."""


class CavityError(TranscoderError):
    """Cavity parameters outside the physical range (R = 1, unstable resonator)."""


class GridError(TranscoderError):
    """Quadrature grid cannot resolve the requested fields."""


class ConversionError(TranscoderError):
    """Input state or timing incompatible with the loop engine."""
