"""Exact structure computations for finite-dimensional (right) Leibniz algebras."""

from .algebra import (Algebra, LeibnizDefect, bracket, change_basis, direct_sum, left_mult, rebase,
                      right_mult, subspace_product, verify_leibniz)
from .catalog import CatalogError, CatalogSpec, list_family_instances, make, validate_I
from .cohomology import CohomologyReport, coboundary_dim, cocycle_dim, cohomology
from .derivations import (ExtensionSpec, build_extension, derivation_space, is_derivation,
                          nil_independence)
from .invariants import (Fingerprint, associated_graded, center, char_seq_at, char_seq_max,
                         check_nilradical_candidate, derived_series, fingerprint, is_p_filiform,
                         lower_central_series, nilpotency_status, right_annihilator)
from .linalg import Matrix, Q
from .subspace import Subspace

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "associated_graded",
    "bracket",
    "build_extension",
    "CatalogError",
    "CatalogSpec",
    "center",
    "change_basis",
    "char_seq_at",
    "char_seq_max",
    "check_nilradical_candidate",
    "coboundary_dim",
    "cocycle_dim",
    "cohomology",
    "CohomologyReport",
    "derivation_space",
    "derived_series",
    "direct_sum",
    "ExtensionSpec",
    "Fingerprint",
    "fingerprint",
    "is_derivation",
    "is_p_filiform",
    "left_mult",
    "LeibnizDefect",
    "list_family_instances",
    "lower_central_series",
    "make",
    "Matrix",
    "nil_independence",
    "nilpotency_status",
    "Q",
    "rebase",
    "right_annihilator",
    "right_mult",
    "Subspace",
    "subspace_product",
    "validate_I",
    "verify_leibniz",
]
