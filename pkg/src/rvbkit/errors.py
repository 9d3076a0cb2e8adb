"""Exception types shared across the toolkit."""


class RvbError(Exception):
    """Base class for every error raised by this package."""


class InvalidSize(RvbError, ValueError):
    """Site count is odd, too small, or beyond the supported range."""


class InvalidPair(RvbError, ValueError):
    """Two-site operation called with i == j or an out-of-range site."""


class NotHermitian(RvbError, ValueError):
    """Matrix handed to the eigensolver is not Hermitian."""


class InvalidDensityMatrix(RvbError, ValueError):
    """Density matrix has a significantly negative eigenvalue or bad trace."""


class DomainError(RvbError, ValueError):
    """Scalar argument outside the mathematically valid range."""


class NotRotationallyInvariant(RvbError, ValueError):
    """Pair density matrix does not have the isotropic (Werner) structure."""


class NoSolution(RvbError, RuntimeError):
    """Phasor constraint system admits no assignment of unit phasors."""


class Unsupported(RvbError, ValueError):
    """Requested size or mode is outside what this routine implements."""
