import dataclasses
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.sparse import bmat, csr_matrix

from assembly.blocks import (
    assemble_coupling,
    assemble_mean_constraint,
    assemble_nonlinear_mass,
    assemble_weighted_mass,
)
from assembly.rhs import NeumannDatum, ScalarField, VectorField, assemble_rhs
from spaces.cr import CrSpace
from spaces.flux import FluxSpace
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class SaddleSystem:
    """
    Blocks of

        [ M + N   B^T   0 ] [u]   [rhs_u]
        [ B       0     c ] [p] = [rhs_p]
        [ 0       c^T   0 ] [l]   [ 0   ]

    restricted to free CR DoFs; the last row/column exists only with a
    zero-mean constraint. Dirichlet values are already folded into rhs_u.
    """

    M: csr_matrix
    B: csr_matrix
    rhs_u: np.ndarray
    rhs_p: np.ndarray
    c: Optional[np.ndarray] = None
    N: Optional[csr_matrix] = None

    @property
    def n_u(self) -> int:
        return self.M.shape[0]

    @property
    def n_p(self) -> int:
        return self.B.shape[0]

    @property
    def size(self) -> int:
        return self.n_u + self.n_p + (1 if self.c is not None else 0)

    def with_nonlinear(self, N: Optional[csr_matrix]) -> "SaddleSystem":
        return dataclasses.replace(self, N=N)

    def matrix(self) -> csr_matrix:
        top_left = self.M if self.N is None else self.M + self.N
        if self.c is None:
            blocks = [[top_left, self.B.T], [self.B, None]]
        else:
            column = csr_matrix(self.c.reshape(-1, 1))
            blocks = [
                [top_left, self.B.T, None],
                [self.B, None, column],
                [None, column.T, None],
            ]
        return bmat(blocks, format="csr")

    def apply(self, s: np.ndarray) -> np.ndarray:
        """Matrix-vector product with the bordered matrix, block by block."""
        u, p, multiplier = self.split(s)
        top_left = self.M if self.N is None else self.M + self.N
        parts = [top_left @ u + self.B.T @ p, self.B @ u]
        if self.c is not None:
            parts[1] = parts[1] + self.c * multiplier
            parts.append(np.array([self.c @ p]))
        return np.concatenate(parts)

    def rhs(self) -> np.ndarray:
        parts = [self.rhs_u, self.rhs_p]
        if self.c is not None:
            parts.append(np.zeros(1))
        return np.concatenate(parts)

    def stack(self, u: np.ndarray, p_free: np.ndarray, multiplier: float = 0.0) -> np.ndarray:
        parts = [u, p_free]
        if self.c is not None:
            parts.append(np.array([multiplier]))
        return np.concatenate(parts)

    def split(self, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
        u = s[: self.n_u]
        p = s[self.n_u : self.n_u + self.n_p]
        multiplier = float(s[-1]) if self.c is not None else 0.0
        return u, p, multiplier


def assemble_saddle_system(
    flux: FluxSpace,
    cr: CrSpace,
    kinv,
    mu_over_rho: float,
    f: VectorField,
    b: ScalarField,
    g_N: NeumannDatum,
    compatibility: str = "error",
) -> SaddleSystem:
    """Linear part of the discrete problem with Dirichlet DoFs eliminated."""
    M = assemble_weighted_mass(flux, kinv, mu_over_rho)
    coupling = assemble_coupling(flux, cr)
    rhs_u, rhs_p = assemble_rhs(flux, cr, f, b, g_N, compatibility)

    free = cr.free_dofs
    if len(cr.dirichlet_dofs):
        rhs_u = rhs_u - coupling[cr.dirichlet_dofs].T @ cr.dirichlet_values
    c = assemble_mean_constraint(cr)[free] if cr.has_mean_constraint else None
    system = SaddleSystem(M, coupling[free], rhs_u, rhs_p[free], c)
    logger.info(f"Saddle system: n_u={system.n_u}, n_p={system.n_p}, size={system.size}")
    return system


def discrete_operator(
    flux: FluxSpace, M: csr_matrix, z: np.ndarray, alpha: float, beta_over_rho: float
) -> np.ndarray:
    """(M + N(z)) z, the discrete flux operator with its weight taken at z."""
    return (M + assemble_nonlinear_mass(flux, z, alpha, beta_over_rho)) @ z
