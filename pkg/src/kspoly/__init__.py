"""Exact construction and verification of the bivariate Krall-Sheffer
polynomial eigenfunction families (cases I, II, III, V, VIII, IX)."""

from .algebra import (
    ONE,
    X,
    Y,
    BivariatePoly,
    Rational,
    format_rational,
    parse_rational,
    rising_factorial,
)
from .catalog import (
    CASES,
    CaseParams,
    action_relations,
    commuting_ops,
    edge_ladder,
    edge_operators,
    eigenvalue,
    operator_L,
    raising_commutator_rhs,
    raising_ops,
    recurrence_step,
    sample_params,
)
from .errors import (
    AdmissibilityError,
    KspolyError,
    ParameterError,
    StencilError,
    TransferError,
)
from .series import Series2, binomial_series, extract_polys, genfun
from .triangle import (
    Triangle,
    build_ladder,
    build_oracle,
    build_recurrence,
    build_transfer,
    triangle_from_json,
    triangle_to_csv,
    triangle_to_json,
    triangle_to_latex,
)
from .verify import (
    VerificationReport,
    certify_parameter_polynomial_identity,
    check_action_formulas,
    check_genfun_agreement,
    check_ix_to_i_map,
    check_operator_identities,
    check_parity_ix,
    full_suite,
)
from .weyl import DiffOp

__version__ = "0.1.0"

__all__ = [
    "ONE",
    "X",
    "Y",
    "BivariatePoly",
    "Rational",
    "format_rational",
    "parse_rational",
    "rising_factorial",
    "CASES",
    "CaseParams",
    "action_relations",
    "commuting_ops",
    "edge_ladder",
    "edge_operators",
    "eigenvalue",
    "operator_L",
    "raising_commutator_rhs",
    "raising_ops",
    "recurrence_step",
    "sample_params",
    "AdmissibilityError",
    "KspolyError",
    "ParameterError",
    "StencilError",
    "TransferError",
    "Series2",
    "binomial_series",
    "extract_polys",
    "genfun",
    "Triangle",
    "build_ladder",
    "build_oracle",
    "build_recurrence",
    "build_transfer",
    "triangle_from_json",
    "triangle_to_csv",
    "triangle_to_json",
    "triangle_to_latex",
    "VerificationReport",
    "certify_parameter_polynomial_identity",
    "check_action_formulas",
    "check_genfun_agreement",
    "check_ix_to_i_map",
    "check_operator_identities",
    "check_parity_ix",
    "full_suite",
    "DiffOp",
    "__version__",
]
