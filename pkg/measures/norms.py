from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from app.exceptions import InvalidArgumentError
from assembly.blocks import check_same_mesh, weight_degree
from mesh.core import Mesh
from polybasis.integrate import cell_quadrature
from polybasis.quadrature import quadrature_triangle
from spaces.cr import CrSpace
from spaces.evaluate import cell_fields
from spaces.flux import FluxSpace
from utils.logger import get_logger

logger = get_logger(__name__)

Field = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ErrorValue:
    """An error measure; `relative` is False when the exact field has zero norm."""

    value: float
    relative: bool = True

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class ErrorReport:
    h: float
    E_u: float
    E_p: float
    rate_u: Optional[float] = None
    rate_p: Optional[float] = None

    def __post_init__(self):
        if self.E_u < 0 or self.E_p < 0:
            raise InvalidArgumentError(f"error measures must be >= 0, got E_u={self.E_u}, E_p={self.E_p}")


def lp_norm(values: np.ndarray, weights: np.ndarray, p: float) -> float:
    """
    L^p norm from quadrature samples. `values` is (T, nq) for scalars or
    (T, nq, d) for vectors, measured with the Euclidean magnitude.
    """
    if p < 1:
        raise InvalidArgumentError(f"L^p needs p >= 1, got {p}")
    magnitude = np.abs(values) if values.ndim == 2 else np.linalg.norm(values, axis=-1)
    return float(np.sum(weights * magnitude**p) ** (1.0 / p))


def field_lp_norm(mesh: Mesh, field: Field, p: float, degree: int) -> float:
    _, points, weights = cell_quadrature(mesh, degree)
    values = np.asarray(field(points.reshape(-1, 2)), dtype=float)
    return lp_norm(values.reshape(weights.shape + values.shape[1:]), weights, p)


def broken_gradient_norm(cr: CrSpace, coeffs: np.ndarray, p: float, degree: Optional[int] = None) -> float:
    """||grad_h v||_{L^p}, the broken W^{1,p} seminorm of a CR function."""
    degree = weight_degree(cr.k) if degree is None else degree
    rule = quadrature_triangle(degree)
    weights = 2.0 * cr.mesh.areas[:, None] * rule.weights[None, :]
    _, grads = cell_fields(cr, coeffs, rule)
    return lp_norm(grads, weights, p)


def _relative(error: float, reference: float, label: str) -> ErrorValue:
    if reference == 0.0:
        logger.warning(f"{label}: exact field has zero norm, reporting the absolute error")
        return ErrorValue(error, relative=False)
    return ErrorValue(error / reference)


def error_flux_l2(flux: FluxSpace, u_exact: Field, u_h: np.ndarray, degree: Optional[int] = None) -> ErrorValue:
    """||u - u_h|| / ||u|| in L^2 with quadrature degree 2k + 6."""
    degree = weight_degree(flux.degree + 1) if degree is None else degree
    rule, points, weights = cell_quadrature(flux.mesh, degree)
    exact = np.asarray(u_exact(points.reshape(-1, 2)), dtype=float).reshape(weights.shape + (flux.components,))
    discrete = flux.values_at(u_h, rule)
    return _relative(lp_norm(exact - discrete, weights, 2.0), lp_norm(exact, weights, 2.0), "flux error")


def conjugate_exponent(alpha: float) -> float:
    if alpha <= 1:
        raise InvalidArgumentError(f"conjugate exponent needs alpha > 1, got {alpha}")
    return alpha / (alpha - 1.0)


def error_potential_grad(
    cr: CrSpace, grad_p_exact: Field, p_h: np.ndarray, alpha: float, degree: Optional[int] = None
) -> ErrorValue:
    """||grad_h (p - p_h)||_{L^a'} / ||grad p||_{L^a'} with a' = alpha / (alpha - 1)."""
    if alpha <= 2:
        raise InvalidArgumentError(f"alpha must be > 2, got {alpha}")
    exponent = conjugate_exponent(alpha)
    degree = weight_degree(cr.k) if degree is None else degree
    rule, points, weights = cell_quadrature(cr.mesh, degree)
    exact = np.asarray(grad_p_exact(points.reshape(-1, 2)), dtype=float).reshape(weights.shape + (2,))
    _, discrete = cell_fields(cr, p_h, rule)
    return _relative(
        lp_norm(exact - discrete, weights, exponent), lp_norm(exact, weights, exponent), "potential error"
    )


def error_report(
    flux: FluxSpace,
    cr: CrSpace,
    u_exact: Field,
    grad_p_exact: Field,
    u_h: np.ndarray,
    p_h: np.ndarray,
    alpha: float,
) -> ErrorReport:
    check_same_mesh(flux, cr)
    return ErrorReport(
        h=cr.mesh.h,
        E_u=float(error_flux_l2(flux, u_exact, u_h)),
        E_p=float(error_potential_grad(cr, grad_p_exact, p_h, alpha)),
    )
