from typing import Callable, Tuple

import numpy as np

from app.constants import COMPATIBILITY_TOL
from app.exceptions import DataError, InvalidArgumentError
from assembly.blocks import check_same_mesh, scatter_cell_vectors, weight_degree
from polybasis.integrate import cell_quadrature, facet_barycentric, facet_quadrature
from spaces.cr import CrSpace
from spaces.evaluate import tabulate_cells
from spaces.flux import FluxSpace, project_l2
from spaces.local import evaluate_local
from utils.logger import get_logger

logger = get_logger(__name__)

VectorField = Callable[[np.ndarray], np.ndarray]
ScalarField = Callable[[np.ndarray], np.ndarray]
# g_N(points (n, 2), outward normals (n, 2)) -> (n,)
NeumannDatum = Callable[[np.ndarray, np.ndarray], np.ndarray]

COMPATIBILITY_MODES = ("error", "warn")


def _neumann_load(cr: CrSpace, g_N: NeumannDatum, degree: int) -> Tuple[np.ndarray, float]:
    facets = cr.topo.neumann
    if len(facets) == 0:
        return np.zeros(cr.n_dofs), 0.0
    rule, points, weights = facet_quadrature(cr.mesh, cr.topo, facets, degree)
    normals = np.repeat(cr.topo.normals[facets], rule.n_points, axis=0)
    data = np.asarray(g_N(points.reshape(-1, 2), normals), dtype=float).reshape(weights.shape)
    lam, cells = facet_barycentric(cr.mesh, cr.topo, facets, 0, rule)
    values = evaluate_local(cr.k, lam, cr.flips[cells])
    local = np.einsum("nlq,nq,nq->nl", values, data, weights)
    return scatter_cell_vectors(cr.cell_dofs[cells], local, cr.n_dofs), float(np.sum(data * weights))


def assemble_rhs(
    flux: FluxSpace,
    cr: CrSpace,
    f: VectorField,
    b: ScalarField,
    g_N: NeumannDatum,
    compatibility: str = "error",
) -> Tuple[np.ndarray, np.ndarray]:
    """
    rhs_u = int f . phi and rhs_p = -int b psi + int_{Gamma_N} g_N psi over all CR DoFs.

    In pure-Neumann mode int b must equal int g_N; a mismatch raises DataError,
    or only logs a warning with compatibility="warn".
    """
    check_same_mesh(flux, cr)
    if compatibility not in COMPATIBILITY_MODES:
        raise InvalidArgumentError(f"compatibility must be one of {COMPATIBILITY_MODES}, got {compatibility!r}")
    degree = weight_degree(cr.k)
    rhs_u = project_l2(flux, f, degree)

    rule, points, weights = cell_quadrature(cr.mesh, degree)
    source = np.asarray(b(points.reshape(-1, 2)), dtype=float).reshape(weights.shape)
    values = tabulate_cells(cr, rule)
    rhs_p = -scatter_cell_vectors(cr.cell_dofs, np.einsum("tlq,tq,tq->tl", values, source, weights), cr.n_dofs)
    neumann, flux_in = _neumann_load(cr, g_N, degree)
    rhs_p += neumann

    if cr.has_mean_constraint:
        total_source = float(np.sum(source * weights))
        mismatch = abs(total_source - flux_in)
        if mismatch > COMPATIBILITY_TOL * (1.0 + abs(total_source)):
            message = (
                f"incompatible pure-Neumann data: int b = {total_source:.12e}, "
                f"int g_N = {flux_in:.12e}"
            )
            if compatibility == "error":
                raise DataError(message)
            logger.warning(message)
    return rhs_u, rhs_p
