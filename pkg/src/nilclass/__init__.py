"""Exact computations with finite-dimensional nilpotent Lie algebras.

Structure-constant algebras over QQ or GF(p), central series, the
nonabelian exterior square and Schur multiplier, capability, and the
classification of class-4 algebras with three-dimensional derived algebra.
"""
from .classify4 import ClassificationResult, capability_verdict_fg1, capable_by_central_quotient, classify, precheck
from .constructions import central_product, heisenberg, heisenberg_decompose, semidirect_sum, stem_decompose
from .exterior import exterior_center, exterior_square, is_capable, multiplier_dim, multiplier_dims
from .field_linalg import GF, QQ, FieldSpec, Matrix, Subspace
from .iso import fingerprint, search_isomorphism, verify_isomorphism
from .lie_core import LieAlgebra, abelian, change_basis, direct_sum, nilpotency_class, quotient, validate
from .presentations import catalog, emit, parse_presentation

__version__ = "0.1.0"

__all__ = [
    "ClassificationResult", "capability_verdict_fg1", "capable_by_central_quotient", "classify", "precheck",
    "central_product", "heisenberg", "heisenberg_decompose", "semidirect_sum", "stem_decompose",
    "exterior_center", "exterior_square", "is_capable", "multiplier_dim", "multiplier_dims",
    "GF", "QQ", "FieldSpec", "Matrix", "Subspace",
    "fingerprint", "search_isomorphism", "verify_isomorphism",
    "LieAlgebra", "abelian", "change_basis", "direct_sum", "nilpotency_class", "quotient", "validate",
    "catalog", "emit", "parse_presentation",
]
