"""Mahler measures and Fuglede-Kadison determinants over group rings.

The package computes Mahler measures of Laurent polynomials (exact roots
in one variable, torus quadrature and iterated specialization in several),
Fuglede-Kadison determinants of group ring matrices over Z^d and over
finite groups, runs exhaustive searches for the generalized Lehmer
constants, and tests determinant approximation along chains of finite
quotients.  The ``fkdet`` command line tool fronts the same operations.
"""

__version__ = "0.1.0"

from .approx import (
    DetSequence,
    QuotientChain,
    TraceCheck,
    chain_doubling,
    chain_primes,
    chain_range,
    det_sequence,
    det_sequence_to_csv,
    norm_bound,
    reduce_mod,
    trace_element,
    trace_match_check,
)
from .fk_finite import (
    FiniteGroup,
    FiniteGroupRingElement,
    FiniteGroupRingMatrix,
    direct_product,
    fk_det_2x2_trivial,
    fk_det_finite,
    format_element,
    induce,
    make_cyclic,
    make_cyclic_product,
    norm_element,
    parse_element,
    regular_rep,
    restrict,
    vn_dim_kernel_finite,
)
from .fk_zd import (
    PipelineError,
    PipelineTrace,
    SpecSchedule,
    build_schedule,
    fk_det_zd,
    fk_det_zd_via_specialization,
    vn_dim_kernel_zd,
)
from .laurent import (
    GroupRingMatrix,
    LaurentPolynomial,
    format_polynomial,
    matrix_from_json,
    matrix_to_json,
    parse_polynomial,
)
from .lehmer_scan import (
    VARIANTS,
    ScanReport,
    SearchSpace,
    constants_to_json,
    exact_constants,
    scan,
    survey_to_csv,
    torsion_bound_check,
    witness_value,
)
from .mahler import (
    default_bl_schedule,
    log_mahler_quadrature,
    mahler_boyd_lawton,
    mahler_jensen,
    roots_one_var,
    squarefree_decomposition,
)
from .values import FKValue, MahlerValue, Radical

__all__ = [
    "DetSequence",
    "FKValue",
    "FiniteGroup",
    "FiniteGroupRingElement",
    "FiniteGroupRingMatrix",
    "GroupRingMatrix",
    "LaurentPolynomial",
    "MahlerValue",
    "PipelineError",
    "PipelineTrace",
    "QuotientChain",
    "Radical",
    "ScanReport",
    "SearchSpace",
    "SpecSchedule",
    "TraceCheck",
    "VARIANTS",
    "build_schedule",
    "chain_doubling",
    "chain_primes",
    "chain_range",
    "constants_to_json",
    "det_sequence",
    "det_sequence_to_csv",
    "direct_product",
    "exact_constants",
    "fk_det_2x2_trivial",
    "fk_det_finite",
    "fk_det_zd",
    "fk_det_zd_via_specialization",
    "format_element",
    "format_polynomial",
    "induce",
    "log_mahler_quadrature",
    "mahler_boyd_lawton",
    "mahler_jensen",
    "make_cyclic",
    "make_cyclic_product",
    "matrix_from_json",
    "matrix_to_json",
    "norm_bound",
    "norm_element",
    "parse_element",
    "parse_polynomial",
    "reduce_mod",
    "regular_rep",
    "restrict",
    "roots_one_var",
    "scan",
    "squarefree_decomposition",
    "survey_to_csv",
    "torsion_bound_check",
    "trace_element",
    "trace_match_check",
    "vn_dim_kernel_finite",
    "vn_dim_kernel_zd",
    "witness_value",
]
