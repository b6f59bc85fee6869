"""Desk-scale numerical laboratory for norms, pointwise products and
factorizations of discretized symmetric function spaces.

Everything runs on finite step functions over geometric grids, so each
"norm" here is the exact norm of a step function — closed-form where
the space allows it, otherwise a certified variational bound whose
direction is always recorded on the result.
"""

from .grid import (
    MeasureSpace,
    StepFunction,
    common_refinement,
    counting,
    default_grid_cells,
    dilate,
    double_star,
    half_line,
    integrate,
    integrate_against,
    rearrange,
    step_from_json,
    step_to_json,
    unit_interval,
)
from .operators import (
    PiecewiseSmoothFn,
    IndexReport,
    OperatorNormBound,
    boyd_indices,
    dilation_indices,
    hardy,
    hardy_dual,
    hardy_identity_residual,
    operator_norm,
    simonenko_indices,
)
from .product import (
    FactorizationWitness,
    calderon_norm,
    dual_norm_numeric,
    equalize_norms,
    lozanovskii_factorize,
    multiplier_norm,
    orlicz_factor_witness,
    product_norm,
    witness_from_json,
    witness_to_json,
)
from .spaces import (
    Calderon,
    Convexification,
    Dual,
    LInftyWeighted,
    LorentzLambda,
    LorentzLambdaP,
    Lp,
    Marcinkiewicz,
    MarcinkiewiczStar,
    Multiplier,
    NormResult,
    OrliczCL,
    Product,
    Symmetrization,
    canonical,
    dual_descriptor,
    fundamental,
    is_primitive,
    is_symmetric,
    lorentz_p1_exact,
    lorentz_pq,
    luxemburg_norm,
    modular,
    norm,
    norm_evaluator,
    space_from_json,
    space_to_json,
    symmetrization_norm,
    weak_lp,
)
from .verify import (
    CheckReport,
    SuiteConfig,
    registered_suites,
    report_to_csv,
    report_to_json,
    run_all,
    run_suite,
)
from .weights import PowerWeight, Weight
from .young import (
    Capped,
    Ominus,
    Oplus,
    Power,
    RelationCertificate,
    ShiftedPower,
    YoungFunction,
    YoungMax,
    YoungSum,
    check_condition_power_bound,
    check_relation,
    inverse,
    inverse_batch,
    is_midpoint_convex_sampled,
    ominus,
    oplus,
    young_from_json,
    young_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # grid
    "MeasureSpace",
    "StepFunction",
    "unit_interval",
    "half_line",
    "counting",
    "default_grid_cells",
    "rearrange",
    "double_star",
    "dilate",
    "integrate",
    "integrate_against",
    "common_refinement",
    "step_to_json",
    "step_from_json",
    # young
    "YoungFunction",
    "YoungMax",
    "YoungSum",
    "Power",
    "ShiftedPower",
    "Capped",
    "Oplus",
    "Ominus",
    "oplus",
    "ominus",
    "inverse",
    "inverse_batch",
    "is_midpoint_convex_sampled",
    "check_relation",
    "check_condition_power_bound",
    "RelationCertificate",
    "young_to_json",
    "young_from_json",
    # weights
    "Weight",
    "PowerWeight",
    # spaces
    "Lp",
    "LorentzLambda",
    "LorentzLambdaP",
    "Marcinkiewicz",
    "MarcinkiewiczStar",
    "LInftyWeighted",
    "OrliczCL",
    "Calderon",
    "Product",
    "Multiplier",
    "Dual",
    "Convexification",
    "Symmetrization",
    "NormResult",
    "norm",
    "norm_evaluator",
    "fundamental",
    "modular",
    "luxemburg_norm",
    "dual_descriptor",
    "symmetrization_norm",
    "canonical",
    "is_primitive",
    "is_symmetric",
    "lorentz_pq",
    "lorentz_p1_exact",
    "weak_lp",
    "space_to_json",
    "space_from_json",
    # operators
    "hardy",
    "hardy_dual",
    "hardy_identity_residual",
    "operator_norm",
    "dilation_indices",
    "simonenko_indices",
    "boyd_indices",
    "IndexReport",
    "PiecewiseSmoothFn",
    "OperatorNormBound",
    # product
    "FactorizationWitness",
    "product_norm",
    "equalize_norms",
    "calderon_norm",
    "multiplier_norm",
    "dual_norm_numeric",
    "lozanovskii_factorize",
    "orlicz_factor_witness",
    "witness_to_json",
    "witness_from_json",
    # verify
    "SuiteConfig",
    "CheckReport",
    "run_suite",
    "run_all",
    "registered_suites",
    "report_to_json",
    "report_to_csv",
]
