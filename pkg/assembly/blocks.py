from typing import Optional

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from app.constants import POLY_QUAD_OFFSET, SMOOTH_QUAD_OFFSET
from app.exceptions import DataError, InvalidArgumentError, StructuralError
from polybasis.integrate import cell_quadrature
from spaces.cr import CrSpace
from spaces.evaluate import tabulate_cells
from spaces.flux import FluxSpace
from utils.logger import get_logger

logger = get_logger(__name__)


def poly_degree(k: int) -> int:
    return 2 * k + POLY_QUAD_OFFSET


def weight_degree(k: int) -> int:
    return 2 * k + SMOOTH_QUAD_OFFSET


def block_diagonal(blocks: np.ndarray) -> csr_matrix:
    """(T, b, b) dense cell blocks -> sparse block-diagonal matrix, cells in order."""
    n_cells, size, _ = blocks.shape
    base = np.arange(n_cells)[:, None, None] * size
    rows = np.broadcast_to(base + np.arange(size)[None, :, None], blocks.shape)
    cols = np.broadcast_to(base + np.arange(size)[None, None, :], blocks.shape)
    shape = (n_cells * size, n_cells * size)
    return coo_matrix((blocks.ravel(), (rows.ravel(), cols.ravel())), shape=shape).tocsr()


def scatter_cell_matrices(
    row_dofs: np.ndarray, col_dofs: np.ndarray, local: np.ndarray, shape
) -> csr_matrix:
    """Sum (T, a, b) local matrices into a global matrix; negative indices are dropped."""
    rows = np.broadcast_to(row_dofs[:, :, None], local.shape).ravel()
    cols = np.broadcast_to(col_dofs[:, None, :], local.shape).ravel()
    data = local.ravel()
    keep = (rows >= 0) & (cols >= 0)
    return coo_matrix((data[keep], (rows[keep], cols[keep])), shape=shape).tocsr()


def scatter_cell_vectors(dofs: np.ndarray, local: np.ndarray, size: int) -> np.ndarray:
    rows = dofs.ravel()
    data = local.ravel()
    keep = rows >= 0
    return np.bincount(rows[keep], weights=data[keep], minlength=size)


def check_same_mesh(flux: FluxSpace, cr: CrSpace) -> None:
    if flux.mesh is not cr.mesh:
        raise StructuralError("flux and CR spaces live on different meshes")


def _cell_tensors(kinv, n_cells: int) -> np.ndarray:
    kinv = np.asarray(kinv, dtype=float)
    if kinv.shape == (2, 2):
        kinv = np.broadcast_to(kinv, (n_cells, 2, 2))
    if kinv.shape != (n_cells, 2, 2):
        raise DataError(f"K^-1 must be (2, 2) or ({n_cells}, 2, 2), got {kinv.shape}")
    if not np.allclose(kinv, np.swapaxes(kinv, 1, 2), rtol=1e-12, atol=1e-14):
        raise DataError("K^-1 is not symmetric")
    eigenvalues = np.linalg.eigvalsh(kinv)
    if np.any(eigenvalues[:, 0] <= 0.0):
        cell = int(np.argmin(eigenvalues[:, 0]))
        raise DataError(f"K^-1 is not positive definite on cell {cell} (min eigenvalue {eigenvalues[cell, 0]:.3e})")
    return kinv


def min_eigenvalue(kinv, n_cells: int = 1) -> float:
    """Smallest eigenvalue of K^-1 over all cells."""
    return float(np.linalg.eigvalsh(_cell_tensors(kinv, n_cells))[:, 0].min())


def _scalar_gram(flux: FluxSpace, degree: int, weight: Optional[np.ndarray] = None) -> np.ndarray:
    """(T, n_modes, n_modes) integrals of weight * phi_m * phi_n per cell."""
    rule, _, weights = cell_quadrature(flux.mesh, degree)
    phi = flux.tabulate(rule)
    w = weights if weight is None else weights * weight
    return np.einsum("tmq,tnq,tq->tmn", phi, phi, w)


def assemble_flux_mass(flux: FluxSpace) -> csr_matrix:
    """Unweighted L2 Gram matrix of the flux basis."""
    gram = _scalar_gram(flux, poly_degree(flux.degree + 1))
    eye = np.eye(flux.components)
    blocks = np.einsum("de,tmn->tdmen", eye, gram).reshape(flux.mesh.n_cells, flux.block_size, flux.block_size)
    return block_diagonal(blocks)


def assemble_weighted_mass(flux: FluxSpace, kinv, mu_over_rho: float) -> csr_matrix:
    """M_ij = (mu/rho) int (K^-1 phi_j) . phi_i with K^-1 constant per cell."""
    if mu_over_rho <= 0:
        raise InvalidArgumentError(f"mu/rho must be > 0, got {mu_over_rho}")
    kinv = _cell_tensors(kinv, flux.mesh.n_cells)
    gram = _scalar_gram(flux, poly_degree(flux.degree + 1))
    blocks = mu_over_rho * np.einsum("tde,tmn->tdmen", kinv, gram)
    return block_diagonal(blocks.reshape(flux.mesh.n_cells, flux.block_size, flux.block_size))


def nonlinear_weight(flux: FluxSpace, u_prev: np.ndarray, alpha: float, beta_over_rho: float, degree: int):
    """Quadrature rule and beta/rho |u|^(alpha - 2) at its points, (T, nq)."""
    rule, _, _ = cell_quadrature(flux.mesh, degree)
    u = flux.values_at(u_prev, rule)
    magnitude = np.sqrt(np.einsum("tqd,tqd->tq", u, u))
    return rule, beta_over_rho * magnitude ** (alpha - 2.0)


def assemble_nonlinear_mass(
    flux: FluxSpace, u_prev: np.ndarray, alpha: float, beta_over_rho: float, degree: Optional[int] = None
) -> csr_matrix:
    """N_ij = (beta/rho) int |u_prev|^(alpha - 2) phi_j . phi_i."""
    if alpha <= 2:
        raise InvalidArgumentError(f"alpha must be > 2, got {alpha}")
    if beta_over_rho < 0:
        raise InvalidArgumentError(f"beta/rho must be >= 0, got {beta_over_rho}")
    degree = weight_degree(flux.degree + 1) if degree is None else degree
    _, weight = nonlinear_weight(flux, u_prev, alpha, beta_over_rho, degree)
    gram = _scalar_gram(flux, degree, weight)
    eye = np.eye(flux.components)
    blocks = np.einsum("de,tmn->tdmen", eye, gram)
    return block_diagonal(blocks.reshape(flux.mesh.n_cells, flux.block_size, flux.block_size))


def assemble_coupling(flux: FluxSpace, cr: CrSpace) -> csr_matrix:
    """B[q, v] = int grad_h psi_q . phi_v over all CR DoFs (Dirichlet rows included)."""
    check_same_mesh(flux, cr)
    if flux.components != 2:
        raise StructuralError("coupling needs a two-component flux space")
    rule, _, weights = cell_quadrature(flux.mesh, poly_degree(cr.k))
    _, grads = tabulate_cells(cr, rule, derivatives=True)
    phi = flux.tabulate(rule)
    local = np.einsum("tlqd,tmq,tq->tldm", grads, phi, weights)
    n_cells = flux.mesh.n_cells
    local = local.reshape(n_cells, cr.layout.n_local, flux.block_size)
    col_dofs = np.arange(n_cells)[:, None] * flux.block_size + np.arange(flux.block_size)[None, :]
    coupling = scatter_cell_matrices(cr.cell_dofs, col_dofs, local, (cr.n_dofs, flux.n_dofs))
    logger.debug(f"Coupling block {coupling.shape}, nnz={coupling.nnz}")
    return coupling


def assemble_broken_stiffness(cr: CrSpace) -> csr_matrix:
    """S_ij = int grad_h psi_j . grad_h psi_i."""
    rule, _, weights = cell_quadrature(cr.mesh, poly_degree(cr.k))
    _, grads = tabulate_cells(cr, rule, derivatives=True)
    local = np.einsum("tlqd,tjqd,tq->tlj", grads, grads, weights)
    return scatter_cell_matrices(cr.cell_dofs, cr.cell_dofs, local, (cr.n_dofs, cr.n_dofs))


def assemble_cr_mass(cr: CrSpace) -> csr_matrix:
    rule, _, weights = cell_quadrature(cr.mesh, poly_degree(cr.k))
    values = tabulate_cells(cr, rule)
    local = np.einsum("tlq,tjq,tq->tlj", values, values, weights)
    return scatter_cell_matrices(cr.cell_dofs, cr.cell_dofs, local, (cr.n_dofs, cr.n_dofs))


def assemble_mean_constraint(cr: CrSpace) -> np.ndarray:
    """c_q = int psi_q over all CR DoFs."""
    rule, _, weights = cell_quadrature(cr.mesh, poly_degree(cr.k))
    values = tabulate_cells(cr, rule)
    local = np.einsum("tlq,tq->tl", values, weights)
    return scatter_cell_vectors(cr.cell_dofs, local, cr.n_dofs)
