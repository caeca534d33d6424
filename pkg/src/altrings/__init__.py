"""Exact workbench for finite-dimensional alternative algebras.

Structure constants over Q or GF(p), Peirce decomposition at an
idempotent, hypothesis checkers, derivation and Lie-type derivation
spaces, the derivation + central-map splitting, and brute-force table
search on small finite rings.
"""

from .algebra import (
    Algebra,
    AlgebraElement,
    AlgebraError,
    BudgetError,
    IdentityReport,
    LinearMap,
    associator,
    center,
    classify_identities,
    commutator,
    find_idempotents,
    find_unit,
    is_idempotent,
    jordan_product,
    nucleus,
    torsion_free,
)
from .catalog import CATALOG_NAMES, SafError, catalog, direct_sum, opposite, parse, serialize
from .fields import GF, QQ, FieldError, PrimeField, RationalField, parse_field
from .finite import (
    FiniteRing,
    MapTable,
    almost_additivity_defect,
    construct_converse_example,
    pruned_exhaustive_search,
    verify_lie_n_identity,
)
from .lietype import (
    Decomposition,
    DecompositionError,
    NormalizationError,
    OperatorSpace,
    check_conditions_abc,
    conditions_abc_subspace,
    decompose,
    derivation_space,
    fosner_inclusion,
    lie_leibniz_residual,
    lie_n_derivation_space,
    nested_commutator,
    nested_commutator_span,
    normalize_at_idempotent,
    standard_inner_derivation,
)
from .linalg import Matrix, Subspace, kernel, rank, rref, solve
from .peirce import (
    PeirceContext,
    PeirceError,
    check_conditions_1_to_4,
    check_offdiag_commutant,
    is_prime,
    peirce_context,
    verify_peirce_relations,
)
from .verdict import ConditionVerdict, Verdict

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "AlgebraElement",
    "AlgebraError",
    "BudgetError",
    "CATALOG_NAMES",
    "ConditionVerdict",
    "Decomposition",
    "DecompositionError",
    "FieldError",
    "FiniteRing",
    "GF",
    "IdentityReport",
    "LinearMap",
    "MapTable",
    "Matrix",
    "NormalizationError",
    "OperatorSpace",
    "PeirceContext",
    "PeirceError",
    "PrimeField",
    "QQ",
    "RationalField",
    "SafError",
    "Subspace",
    "Verdict",
    "almost_additivity_defect",
    "associator",
    "catalog",
    "center",
    "check_conditions_1_to_4",
    "check_conditions_abc",
    "check_offdiag_commutant",
    "classify_identities",
    "commutator",
    "conditions_abc_subspace",
    "construct_converse_example",
    "decompose",
    "derivation_space",
    "direct_sum",
    "find_idempotents",
    "find_unit",
    "fosner_inclusion",
    "is_idempotent",
    "is_prime",
    "jordan_product",
    "kernel",
    "lie_leibniz_residual",
    "lie_n_derivation_space",
    "nested_commutator",
    "nested_commutator_span",
    "normalize_at_idempotent",
    "nucleus",
    "opposite",
    "parse",
    "parse_field",
    "peirce_context",
    "pruned_exhaustive_search",
    "rank",
    "rref",
    "serialize",
    "solve",
    "standard_inner_derivation",
    "torsion_free",
    "verify_lie_n_identity",
    "verify_peirce_relations",
]
