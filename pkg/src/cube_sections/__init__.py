"""Hyperplane sections of the unit hypercube.

Section volumes (vertex sum and oscillatory integral), exact piecewise
polynomial extremality criteria at diagonals and sub-diagonals, and
certified critical roots with the dimension table.
"""

from .errors import (
    AccuracyError,
    ClosedFormMismatch,
    DegeneratePieceError,
    DegenerateSectionError,
    DomainError,
    PatternViolation,
)
from .exactpoly import (
    Endpoint,
    IsolatingInterval,
    PiecewisePolynomial,
    Polynomial,
    Rational,
    SignSegment,
    binomial,
    isolate_roots,
    refine_interval,
    refine_root,
    sign_pattern,
)
from .criterion import (
    Extremality,
    ExtremalityKind,
    SubdiagonalSpec,
    alt_sum_sign,
    build_S1,
    build_S2,
    classify,
    classify_at_z,
    p_poly,
    t_of_z,
    threshold_z,
    z_of_t,
)
from .volume import (
    Direction,
    QuadratureConfig,
    SectionQuery,
    grad_sum,
    hessian_combo_sum,
    hessian_outside_sum,
    normalized_vertex_sum,
    polya_volume,
    q1_integral,
    q2_integral,
    subdiagonal_direction,
    vertex_sum_volume,
)
from .rho import (
    CertifiedRoot,
    RhoTriple,
    TableRow,
    closed_form_checks,
    solve_rho,
    table,
)

__version__ = "0.1.0"
