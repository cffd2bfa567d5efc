"""Exception types shared across the package."""


class PrimitivityError(ValueError):
    """The requested (N, n) does not define a primitive root of unity."""


class SizeError(RuntimeError):
    """A construction would exceed the configured resource guard."""


class FamilyError(RuntimeError):
    """Operators handed to the joint diagonalizer do not commute."""


class ReconstructionError(RuntimeError):
    """Polynomial coefficients could not be recovered from samples."""


class PoleError(ValueError):
    """Parameters hit a pole of a printed intertwiner entry."""


class BranchError(ValueError):
    """A Moebius / logarithm inversion landed on a singular point."""


class SingularSampleError(RuntimeError):
    """Sampled eigenvalues vanish persistently; formula cannot be applied."""
