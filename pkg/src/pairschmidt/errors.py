"""Exception types raised by pairschmidt.

All of them derive from ``ValueError`` so callers that only care about
"bad input" can catch that.
"""


class SymmetryError(ValueError):
    """Matrix is not (anti)symmetric or Hermitian within tolerance."""

    def __init__(self, message, deviation):
        super().__init__(message)
        self.deviation = deviation


class NormalizationError(ValueError):
    """State violates its family normalization condition."""


class RankError(ValueError):
    """Requested rank is infeasible for the state family."""

    def __init__(self, message, maximum):
        super().__init__(message)
        self.maximum = maximum


class UnitarityError(ValueError):
    """Basis-change matrix is not unitary within tolerance."""

    def __init__(self, message, deviation):
        super().__init__(message)
        self.deviation = deviation


class DegeneracyError(ValueError):
    """Pair of canonical coefficients is not degenerate in modulus."""
