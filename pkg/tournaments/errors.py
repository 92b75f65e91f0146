"""Exceptions raised by the tiling toolkit."""
from typing import Optional


class TilingError(Exception):
    """Root of every error the toolkit raises on purpose."""


class GraphFormatError(TilingError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotATournamentError(TilingError, ValueError):
    pass


class VertexLimitError(TilingError, ValueError):
    pass


class DivisibilityError(TilingError, ValueError):
    pass


class HypothesisViolation(TilingError, ValueError):
    pass


class UnverifiedRangeError(TilingError, ValueError):
    pass


class LinkingSetNotFound(TilingError, RuntimeError):
    pass


class CertificateError(TilingError, RuntimeError):
    pass
