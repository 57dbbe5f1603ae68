"""Exact support varieties for perfect DG modules and complexes over
artinian complete intersections, computed over finite fields."""

__version__ = "0.1.0"

from .errors import (
    BudgetError,
    DGSupportError,
    InputError,
    InternalCheckError,
    ParseError,
    PreconditionError,
    UnsupportedGradingError,
)
from .fields import Field, FieldSpec, field_for
from .polynomials import Polynomial, PolynomialRing, graded_ring, monomial_basis
from .dgmodules import (
    DGMorphism,
    FreeDGModule,
    HomologyTable,
    cone,
    direct_sum,
    dual,
    hom_adjoint,
    hom_complex,
    homology_dims,
    is_homologous_zero,
    mult_morphism,
    shift,
    tensor,
    tensor_morphism,
    tensor_power,
    unit_module,
)
from .support import (
    VarietySet,
    fiber_homology,
    realize,
    support_contains,
    support_points,
    vanishing_locus,
)
from .cibridge import (
    CIPresentation,
    FiniteComplexOverR,
    LambdaModule,
    adjunction_check,
    ann_theta,
    bgg_h,
    bridge_module,
    build_ci,
    check_quasi_iso,
    ext_dims,
    ext_oracle,
    free_module,
    koszul,
    lambda_cycles,
    lambda_to_k_vectors,
    minimal_resolution,
    monomial_quotient,
    restrict_i,
    syzygy_module,
    t_functor,
    theta_chain_maps,
    theta_ring,
    trivial_module,
    two_term_complex,
    v_r_pipeline,
    w_operator,
)
from .nilpotence import NilpotenceReport, fiberwise_vanishing, nilpotence_search

__all__ = [name for name in dir() if not name.startswith("_")]
