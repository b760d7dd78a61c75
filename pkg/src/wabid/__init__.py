"""Exact verification of derivations, biderivations and commutative post-Lie
structures on the Lie algebras W(a,b)."""

from .bider import (
    BiderSolveReport,
    ClassificationVerdict,
    FamilyMismatchError,
    FamilySpec,
    WindowedBilinearMap,
    classify,
    decompose,
    family_map,
    is_biderivation,
    op_map,
    predicted_families,
    solve_biderivations,
    transport,
)
from .linmap import (
    DerivationSolveReport,
    WindowedLinearMap,
    WindowTooSmallError,
    canonical_derivation,
    expected_derivation_dimension,
    inner_derivation,
    is_derivation,
    solve_derivations,
)
from .postlie import PostLieCandidate, PostLieVerdict, Witness, check_postlie, first_witness, triviality_sweep
from .scalar import Scalar, ScalarParseError, parse_scalar
from .wab import BasisVector, Element, I, L, Params, bracket, check_jacobi, shift_iso

__version__ = "0.1.0"
