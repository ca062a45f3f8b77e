#!/usr/bin/env python3
"""
Exception hierarchy shared by the arithmetic, analytic and CLI layers.
"""


class VoronoiForgeError(Exception):
    """Base class for every error raised by voronoi-forge."""

    pass


class NotInvertible(VoronoiForgeError):
    """Raised when a residue has no inverse modulo m."""

    pass


class OutOfRange(VoronoiForgeError):
    """Raised when an input lies outside the supported desk-scale range."""

    pass


class OverflowPolicyError(VoronoiForgeError):
    """Raised when a cyclotomic order exceeds the configured bound."""

    pass


class NotPrimitive(VoronoiForgeError):
    """Raised when an operation needs a primitive character."""

    pass


class InvalidParams(VoronoiForgeError):
    """Raised when character-sum parameters violate ab | r^inf or (uv, r) = 1."""

    pass


class OutOfDomain(VoronoiForgeError):
    """Raised when a special-function argument leaves the evaluated domain."""

    pass


class PoleError(VoronoiForgeError):
    """Raised when the gamma factor is evaluated at a pole."""

    pass


class ToleranceNotMet(VoronoiForgeError):
    """Raised when quadrature or a truncated sum cannot reach its tolerance."""

    pass


class PrecisionExhausted(VoronoiForgeError):
    """Raised when a q-expansion is too short for the requested coefficients."""

    pass


class AccuracyNotCertified(VoronoiForgeError):
    """Raised when completed-L bounds exceed the target accuracy."""

    pass


class ConfigError(VoronoiForgeError):
    """Configuration errors that should exit cleanly without tracebacks."""

    pass
