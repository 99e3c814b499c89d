"""Domain error types shared across the package."""


class SphereKernelError(Exception):
    """Base class for all domain errors raised by this package."""


class DivergentSeries(SphereKernelError):
    """A weighted coefficient series diverges; no truncation is valid."""


class UnsupportedRange(SphereKernelError):
    """Arguments fall outside the range where a recursion is defined."""


class ToleranceUnreachable(SphereKernelError):
    """No certified truncation point reaches the requested tolerance."""


class DimensionMismatch(SphereKernelError):
    """Vectors or weight lists have incompatible lengths."""
