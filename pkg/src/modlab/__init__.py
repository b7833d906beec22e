"""Modulation-space embedding engine and numerical laboratory."""

from .errors import (
    AliasingError,
    DomainError,
    InconsistencyError,
    ModlabError,
    ResolutionError,
    TruncationError,
)

__version__ = "0.1.0"

__all__ = [
    "AliasingError",
    "DomainError",
    "InconsistencyError",
    "ModlabError",
    "ResolutionError",
    "TruncationError",
    "__version__",
]
