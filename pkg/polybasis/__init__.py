from polybasis.bubbles import bulk_bubble, bulk_bubble_eval, facet_bubble, facet_bubble_eval
from polybasis.flux_basis import ModalFluxBasis, modal_flux_basis, n_modes, reference_flux_basis
from polybasis.legendre import legendre_deriv, legendre_eval, legendre_table
from polybasis.local_basis import LocalBasis
from polybasis.quadrature import QuadratureRule, quadrature_edge, quadrature_triangle

__all__ = [
    "LocalBasis",
    "ModalFluxBasis",
    "QuadratureRule",
    "bulk_bubble",
    "bulk_bubble_eval",
    "facet_bubble",
    "facet_bubble_eval",
    "legendre_deriv",
    "legendre_eval",
    "legendre_table",
    "modal_flux_basis",
    "n_modes",
    "quadrature_edge",
    "quadrature_triangle",
    "reference_flux_basis",
]
