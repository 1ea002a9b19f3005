import numpy as np
from scipy.linalg import eigh

from assembly.blocks import assemble_broken_stiffness, assemble_coupling, assemble_flux_mass
from spaces.cr import CrSpace
from spaces.flux import FluxSpace
from utils.logger import get_logger

logger = get_logger(__name__)


def inf_sup_constant(flux: FluxSpace, cr: CrSpace, kernel_tol: float = 1e-10) -> float:
    """
    min over free q of sup over v of (grad_h q, v) / (||grad_h q|| ||v||) in L2.

    Dense generalized eigenproblem (B M0^-1 B^T) x = lambda S x on the
    complement of ker S (the constants in pure-Neumann mode); meant for small meshes.
    """
    free = cr.free_dofs
    stiffness = assemble_broken_stiffness(cr)[free][:, free].toarray()
    coupling = assemble_coupling(flux, cr)[free].toarray()
    mass = assemble_flux_mass(flux).toarray()
    schur = coupling @ np.linalg.solve(mass, coupling.T)

    eigenvalues, vectors = eigh(stiffness)
    keep = eigenvalues > kernel_tol * eigenvalues.max()
    basis = vectors[:, keep]
    reduced_s = basis.T @ stiffness @ basis
    reduced_g = basis.T @ schur @ basis
    ratios = eigh(0.5 * (reduced_g + reduced_g.T), 0.5 * (reduced_s + reduced_s.T), eigvals_only=True)
    constant = float(np.sqrt(max(ratios.min(), 0.0)))
    logger.info(f"Discrete inf-sup constant: {constant:.12f} ({int((~keep).sum())} kernel modes)")
    return constant
