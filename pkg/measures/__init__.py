from measures.norms import (
    ErrorReport,
    ErrorValue,
    broken_gradient_norm,
    conjugate_exponent,
    error_flux_l2,
    error_potential_grad,
    error_report,
    field_lp_norm,
    lp_norm,
)
from measures.rates import fit_rate, pairwise_rates

__all__ = [
    "ErrorReport",
    "ErrorValue",
    "broken_gradient_norm",
    "conjugate_exponent",
    "error_flux_l2",
    "error_potential_grad",
    "error_report",
    "field_lp_norm",
    "fit_rate",
    "lp_norm",
    "pairwise_rates",
]
