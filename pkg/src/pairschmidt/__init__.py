"""Canonical decompositions and correlation measures for two-particle pure states."""

__version__ = "0.1.0"

from .decompositions import CanonicalDecomposition, decompose, degenerate_pair_rotation
from .errors import DegeneracyError, NormalizationError, RankError, SymmetryError, UnitarityError
from .linalg import svd, takagi, youla
from .measures import (
    CorrelationReport,
    analyze,
    brute_force_oracle,
    entropy_closed_form,
    grobe_k,
    reduced_density,
    verify_det_maximum,
    von_neumann_entropy,
)
from .states import (
    BosonState,
    DistinguishableState,
    Family,
    FermionState,
    haar_unitary,
    make_state,
    normalize,
    random_state,
    transform_basis,
)

__all__ = [
    "BosonState",
    "CanonicalDecomposition",
    "CorrelationReport",
    "DegeneracyError",
    "DistinguishableState",
    "Family",
    "FermionState",
    "NormalizationError",
    "RankError",
    "SymmetryError",
    "UnitarityError",
    "analyze",
    "brute_force_oracle",
    "decompose",
    "degenerate_pair_rotation",
    "entropy_closed_form",
    "grobe_k",
    "haar_unitary",
    "make_state",
    "normalize",
    "random_state",
    "reduced_density",
    "svd",
    "takagi",
    "transform_basis",
    "verify_det_maximum",
    "von_neumann_entropy",
    "youla",
]
