"""Exact-arithmetic toolkit for filtered Lie algebras: admissibility checks,
graded cohomology, Tanaka prolongation, normalization conditions, and the
pointwise normalization solver.

All scalars are exact rationals; every operation is pure and every value is
immutable after construction, so the library is safe to use concurrently.
"""

__version__ = "0.1.0"

from .exactla import (
    Matrix,
    Subspace,
    complement,
    image_basis,
    intersect,
    kernel_basis,
    rank,
    solve_preimage,
)
from .liealg import (
    EffectivityError,
    FilteredLieAlgebra,
    GradedLieAlgebra,
    LieAlgebra,
    associated_graded,
    center,
    check_condition_B,
    check_filtered,
    check_graded,
    check_jacobi,
    continue_filtration,
    graded_derivations,
    killing_form,
    max_ideal_in,
    normalizer,
)
from .cochains import (
    Chain,
    Cochain,
    FilteredHom,
    Splitting,
    check_image_homogeneous,
    cochain_space_basis,
    cohomology_dim,
    differential,
    gr0_blocks,
    gr_ell,
    homogeneous_component,
    homology_differential,
    lift_cochain,
)
from .prolong import (
    FiniteTypeResult,
    ProlongationResult,
    check_full_prolongation_of_m,
    check_full_prolongation_pair,
    is_finite_type,
    tanaka_prolongation,
)
from .normcond import (
    Codifferential,
    InnerProduct,
    NegligibleSubmodule,
    NormalizationCondition,
    adjoint_codifferential,
    check_codifferential,
    check_negligible,
    check_normalization,
    condition_from_codifferential,
    kostant_codifferential,
    module_action,
    normalize_pointwise,
    ode_inner_product,
    quotient_dims,
    skew_derivations,
    subriemannian_inner_product,
)
from . import models

__all__ = [name for name in dir() if not name.startswith("_")]
