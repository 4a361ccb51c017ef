"""Cuntz algebras as a weakly coassociative system, with numerical checks.

The package builds the algebraic layer (words, canonical forms, the
embeddings ``phi_{n,m}`` and the coproduct), the GP states and their
permutative GNS representations on truncated word spaces, and the partial
isometries ``W^(n,m)`` together with covariance and pentagon checks.
"""

from .bialgebra import (
    TensorElement,
    alpha,
    box_unitary,
    check_coassociativity,
    coproduct,
    divisor_pairs,
    phi,
)
from .gns_rep import Representation, TruncatedSpace, build_space, choose_unitary, gns_gram_residual
from .intertwiner import (
    assemble_direct_sum,
    build_U,
    build_V,
    build_W,
    check_coisometry,
    check_covariance,
    check_direct_sum_covariance,
    check_pentagon,
    partial_isometry_residual,
)
from .states import VectorSequence, box_vector, check_monoid_condition, parse_family, rho, state_tensor
from .word_algebra import AlgebraElement, Monomial, canonical_form, equal, level_raise

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "Monomial",
    "canonical_form",
    "equal",
    "level_raise",
    "TensorElement",
    "alpha",
    "box_unitary",
    "check_coassociativity",
    "coproduct",
    "divisor_pairs",
    "phi",
    "VectorSequence",
    "box_vector",
    "check_monoid_condition",
    "parse_family",
    "rho",
    "state_tensor",
    "Representation",
    "TruncatedSpace",
    "build_space",
    "choose_unitary",
    "gns_gram_residual",
    "assemble_direct_sum",
    "build_U",
    "build_V",
    "build_W",
    "check_coisometry",
    "check_covariance",
    "check_direct_sum_covariance",
    "check_pentagon",
    "partial_isometry_residual",
]
