"""Planar harmonic flow-field representations of qubit registers."""

from .errors import (
    ConditioningError,
    PoleEvaluationError,
    QubitFlowError,
    RootFindingError,
)
from .polynomials import Polynomial, RootSet, derivative_eval, roots, wronskian_matrix
from .states import (
    GATES,
    DeutschJozsaResult,
    Gate,
    OracleTable,
    QubitState,
    ShorResult,
    apply_gate,
    cphase,
    deutsch_jozsa,
    factor_out_qubit,
    make_basis_state,
    make_named_state,
    qft,
    shor_period_find,
    tensor,
)
from .fields import (
    LaurentField,
    RationalField,
    RepresentationConfig,
    charge_basis_fields,
    charge_map,
    check_linear_independence,
    eval_field,
    evaluation_matrix,
    exponent,
    field_from_dict,
    nonsingularity_gap,
    laurent_mul,
    make_charge_config,
    make_position_config,
    necessary_charge_bound,
    position_basis_fields,
    position_map,
    sufficient_charge_bound,
    ternary_exponent,
)
from .defects import (
    DefectSet,
    Halo,
    HaloReport,
    detect_halos,
    extract_defects,
    factorizable_qubits,
    field_separability,
    is_separable_geometric,
    is_separable_tensor,
)
from .inner_products import (
    GramContext,
    build_gram,
    circle_inner_product,
    gram_norm,
    inner,
)
from .rendering import (
    FieldGrid,
    NorthPoleReport,
    SphereSample,
    grid_from_csv,
    grid_to_csv,
    north_pole_classify,
    render_svg,
    sample_grid,
    sphere_tangent,
    stereographic_project,
)

__version__ = "0.1.0"

__all__ = [
    "QubitFlowError",
    "PoleEvaluationError",
    "ConditioningError",
    "RootFindingError",
    "Polynomial",
    "RootSet",
    "roots",
    "derivative_eval",
    "wronskian_matrix",
    "QubitState",
    "Gate",
    "GATES",
    "OracleTable",
    "DeutschJozsaResult",
    "ShorResult",
    "make_basis_state",
    "make_named_state",
    "apply_gate",
    "cphase",
    "tensor",
    "factor_out_qubit",
    "qft",
    "deutsch_jozsa",
    "shor_period_find",
    "RepresentationConfig",
    "LaurentField",
    "RationalField",
    "make_charge_config",
    "make_position_config",
    "charge_map",
    "position_map",
    "charge_basis_fields",
    "position_basis_fields",
    "exponent",
    "ternary_exponent",
    "eval_field",
    "laurent_mul",
    "field_from_dict",
    "check_linear_independence",
    "evaluation_matrix",
    "nonsingularity_gap",
    "sufficient_charge_bound",
    "necessary_charge_bound",
    "DefectSet",
    "Halo",
    "HaloReport",
    "extract_defects",
    "detect_halos",
    "field_separability",
    "is_separable_geometric",
    "is_separable_tensor",
    "factorizable_qubits",
    "GramContext",
    "build_gram",
    "inner",
    "gram_norm",
    "circle_inner_product",
    "FieldGrid",
    "sample_grid",
    "grid_to_csv",
    "grid_from_csv",
    "render_svg",
    "SphereSample",
    "sphere_tangent",
    "stereographic_project",
    "NorthPoleReport",
    "north_pole_classify",
]
