"""WACEB, CUBISTA and ADBQUICKEST convection schemes on 1D Riemann problems."""

from .errors import ConfigError, DomainError, NumericalFailure, OracleFailure, PositivityFailure
from .schemes import SchemeId

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DomainError",
    "NumericalFailure",
    "OracleFailure",
    "PositivityFailure",
    "SchemeId",
]
