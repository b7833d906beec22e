"""Exception hierarchy shared by the library and the CLI."""


class ModlabError(Exception):
    """Base class for every error raised by modlab."""


class DomainError(ModlabError, ValueError):
    """Parameters outside the range where a statement is defined."""


class InconsistencyError(ModlabError, RuntimeError):
    """Two overlapping piecewise branches disagree (must never happen)."""


class AliasingError(ModlabError):
    """Spectral mass too close to the Nyquist frequency."""

    def __init__(self, message, max_lambda=None):
        super().__init__(message)
        self.max_lambda = max_lambda


class TruncationError(ModlabError):
    """Band truncation leaves a tail above tolerance."""

    def __init__(self, message, suggested_radius):
        super().__init__(message)
        self.suggested_radius = suggested_radius


class ResolutionError(ModlabError):
    """Grid too coarse or box too small for a construction."""

    def __init__(self, message, required_N=None):
        super().__init__(message)
        self.required_N = required_N
