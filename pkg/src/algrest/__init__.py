"""Exact graded computations with algebraic restrictions of closed 2-forms.

The package works with quasi-homogeneous monomial curve germs t -> (t^l1,
..., t^ls).  It builds the graded basis of restriction classes of closed
2-forms, computes the Lie actions of the liftable vector fields, runs
homotopy reductions, evaluates the discrete symplectic invariants, and
machine-checks the bundled classification tables for the semigroups
(4, 5, 6, 7), (4, 5, 6) and (4, 5, 7).
"""

from .atlas import (
    BUNDLED,
    Atlas,
    AtlasReport,
    RowCheck,
    load_atlas,
    standard_symplectic,
    verify_atlas,
    verify_distinctness,
    verify_row,
)
from .curves import (
    AlgRestriction,
    BasisElement,
    GradedPiece,
    MonomialCurve,
    RestrictionBasis,
    cached_basis,
    default_scan_bound,
    drop_off_curve,
    monomials_of_qdeg,
    project,
    restriction_quotient,
)
from .errors import (
    InputError,
    LiftError,
    NotClosedError,
    NotSymmetryError,
    ScanBoundError,
)
from .forms import (
    DifferentialForm,
    PolyMap,
    VectorField,
    Weights,
    ext_der,
    interior,
    lie_derivative,
    pullback,
    wedge,
)
from .invariants import (
    InvariantReport,
    PmqdVerdict,
    index_of_isotropy,
    invariant_report,
    lagrangian_tangency_order,
    pmqd_compare,
    representable_by_symplectic,
    symplectic_multiplicity,
    tangency_order,
)
from .parser import (
    parse_curve_exponents,
    parse_form,
    parse_map,
    parse_polynomial,
    parse_restriction,
)
from .poly import Polynomial, RationalFunctionT, UniPoly
from .symmetry import (
    LIFT_POLICIES,
    ActionTable,
    HomotopyResult,
    LiftableField,
    ScalingResult,
    TangentSpace,
    action_table,
    admissible_shifts,
    curve_scaling,
    is_modulus,
    lie_action,
    liftable_field,
    moser_reduce,
    nonsemigroup_shifts,
    orbit_tangent_space,
    pullback_restriction,
    scaling_symmetry,
    shift_action,
    symmetry_constant,
    validate_liftable,
)

__version__ = "0.1.0"

__all__ = [
    "ActionTable",
    "AlgRestriction",
    "Atlas",
    "AtlasReport",
    "BUNDLED",
    "BasisElement",
    "DifferentialForm",
    "GradedPiece",
    "HomotopyResult",
    "InputError",
    "InvariantReport",
    "LIFT_POLICIES",
    "LiftError",
    "LiftableField",
    "MonomialCurve",
    "NotClosedError",
    "NotSymmetryError",
    "PmqdVerdict",
    "PolyMap",
    "Polynomial",
    "RationalFunctionT",
    "RestrictionBasis",
    "RowCheck",
    "ScalingResult",
    "ScanBoundError",
    "TangentSpace",
    "UniPoly",
    "VectorField",
    "Weights",
    "action_table",
    "admissible_shifts",
    "cached_basis",
    "curve_scaling",
    "default_scan_bound",
    "drop_off_curve",
    "ext_der",
    "index_of_isotropy",
    "interior",
    "invariant_report",
    "is_modulus",
    "lagrangian_tangency_order",
    "lie_action",
    "lie_derivative",
    "liftable_field",
    "load_atlas",
    "monomials_of_qdeg",
    "moser_reduce",
    "nonsemigroup_shifts",
    "orbit_tangent_space",
    "parse_curve_exponents",
    "parse_form",
    "parse_map",
    "parse_polynomial",
    "parse_restriction",
    "pmqd_compare",
    "project",
    "pullback",
    "pullback_restriction",
    "representable_by_symplectic",
    "restriction_quotient",
    "scaling_symmetry",
    "shift_action",
    "standard_symplectic",
    "symmetry_constant",
    "symplectic_multiplicity",
    "tangency_order",
    "validate_liftable",
    "verify_atlas",
    "verify_distinctness",
    "verify_row",
    "wedge",
]
