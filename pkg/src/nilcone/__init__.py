"""Exact classification of nilpotent elements in End(V, Q), weight filtrations,
Deligne splittings and desk-scale verification of nilpotent-cone congruence."""

from nilcone.errors import (
    DimensionMismatch,
    IllDefined,
    InvalidInvariants,
    NilconeError,
    NotInAlgebra,
    NotNilpotent,
)
from nilcone.scalars import I, GaussianRational
from nilcone.linalg import Matrix, Subspace, Quotient, Filtration, SymForm, HermForm
from nilcone.nilpotent import (
    FormSpace,
    NilpotentElement,
    OrbitInvariants,
    invariants,
    jordan_type,
    standard_triple,
    weight_filtration,
)
from nilcone.hodge import HodgeFlag, deligne_splitting, is_lmhs, representative_flag
from nilcone.cone import ConeRunConfig, NilpotentCone, run_cone, verify_ck, verify_theorem1
from nilcone.orbits import (
    ClassLabel,
    classify_complex,
    classify_real,
    construct_representative,
    validate_invariants,
)

__version__ = "0.1.0"

__all__ = [
    "ClassLabel",
    "ConeRunConfig",
    "DimensionMismatch",
    "Filtration",
    "FormSpace",
    "GaussianRational",
    "HermForm",
    "HodgeFlag",
    "I",
    "IllDefined",
    "InvalidInvariants",
    "Matrix",
    "NilconeError",
    "NilpotentCone",
    "NilpotentElement",
    "NotInAlgebra",
    "NotNilpotent",
    "OrbitInvariants",
    "Quotient",
    "Subspace",
    "SymForm",
    "classify_complex",
    "classify_real",
    "construct_representative",
    "deligne_splitting",
    "invariants",
    "is_lmhs",
    "jordan_type",
    "representative_flag",
    "run_cone",
    "standard_triple",
    "validate_invariants",
    "verify_ck",
    "verify_theorem1",
    "weight_filtration",
]
