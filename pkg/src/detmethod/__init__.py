"""Real-analytic determinant method at desk scale.

Given an ideal and a height bound, construct integer auxiliary polynomials
vanishing at every integral (affine) or rational (projective) point of
bounded height, together with verifiable certificates.
"""

from .bounds import (
    D,
    DetBoundInput,
    ExponentBudget,
    L,
    asymptotic_exponents,
    choose_nu,
    ck_norm_bound,
    determinant_bound,
    determinant_bound_exact,
    product_norm_bound,
    product_norm_bound_exact,
)
from .engine import (
    AuxiliaryCertificate,
    Chart,
    MonomialMatrix,
    PipelineReport,
    affine_pipeline,
    auxiliary_for_box,
    build_matrix,
    chart_norm_bound,
    choose_delta,
    cover_and_construct,
    exact_kernel,
    matrix_rank,
    parabola_chart,
    theoretical_rho,
    verify_certificate,
)
from .errors import (
    BudgetExceededError,
    DegenerateIdealError,
    InputError,
    ParseError,
    TheoreticalFalsificationError,
)
from .ideals import (
    GroebnerBasis,
    Ideal,
    Staircase,
    a_estimates,
    affine_ordering_bound,
    all_sigmas,
    dimension_and_degree,
    groebner,
    hilbert_function,
    homogenize_ideal,
    monomials_of_degree,
    normal_form,
    sigma,
    staircase,
)
from .points import (
    HeightBox,
    PointSet,
    class_index,
    enumerate_affine,
    enumerate_projective,
    partition_classes,
    tau_normalize,
)
from .polynomials import (
    Ordering,
    Polynomial,
    compare,
    divides,
    format_polynomial,
    parse_polynomial,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
