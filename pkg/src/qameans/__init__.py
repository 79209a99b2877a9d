"""Quasi-arithmetic means, distance bounds between them, and worst-case search."""

from .bounds import (
    BoundReport,
    best_bound,
    bound_cargo_shisha,
    bound_l1,
    bound_osc,
    bound_pales,
    inflated_sup_b_diff,
)
from .errors import (
    ArgumentError,
    DegeneratePointError,
    EvaluationError,
    QamError,
    RangeError,
    VanishingDerivativeError,
)
from .generators import (
    Generator,
    Interval,
    affine,
    batch_inverse,
    exp,
    finite_difference,
    identity,
    inverse,
    log,
    parse_generator,
    power,
    sine_perturbed,
)
from .means import WeightedSample, parse_sample, power_mean, qa_mean, qa_mean_batch
from .norms import (
    NormEstimate,
    b_diff_grid_max,
    inf_abs_deriv,
    l1_norm,
    osc_norm,
    sup_b_diff,
    sup_norm,
)
from .operators import DeltaPoint, arrow_pratt, pales_b, weighted_b_sum
from .search import (
    DiagnosticRow,
    RhoEstimate,
    SearchConfig,
    convergence_diagnostic,
    rho_lower_bound,
)

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "BoundReport",
    "DegeneratePointError",
    "DeltaPoint",
    "DiagnosticRow",
    "EvaluationError",
    "Generator",
    "Interval",
    "NormEstimate",
    "QamError",
    "RangeError",
    "RhoEstimate",
    "SearchConfig",
    "VanishingDerivativeError",
    "WeightedSample",
    "affine",
    "arrow_pratt",
    "b_diff_grid_max",
    "batch_inverse",
    "best_bound",
    "bound_cargo_shisha",
    "bound_l1",
    "bound_osc",
    "bound_pales",
    "convergence_diagnostic",
    "exp",
    "finite_difference",
    "identity",
    "inf_abs_deriv",
    "inflated_sup_b_diff",
    "inverse",
    "l1_norm",
    "log",
    "osc_norm",
    "parse_generator",
    "parse_sample",
    "pales_b",
    "power",
    "power_mean",
    "qa_mean",
    "qa_mean_batch",
    "rho_lower_bound",
    "sine_perturbed",
    "sup_b_diff",
    "sup_norm",
    "weighted_b_sum",
]
