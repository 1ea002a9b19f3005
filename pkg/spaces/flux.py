from dataclasses import dataclass
from typing import Callable

import numpy as np

from app.constants import SMOOTH_QUAD_OFFSET
from app.exceptions import InvalidArgumentError
from mesh.core import Mesh
from polybasis.flux_basis import ModalFluxBasis, reference_flux_basis
from polybasis.integrate import cell_quadrature
from polybasis.quadrature import QuadratureRule


@dataclass(frozen=True, eq=False)
class FluxSpace:
    """
    Elementwise discontinuous P_degree fields with `components` Cartesian components.

    DoF (cell c, component d, mode m) sits at c * components * n_modes + d * n_modes + m.
    The flux space of order k has degree k - 1 and two components.
    """

    mesh: Mesh
    degree: int
    components: int = 2

    def __post_init__(self):
        if self.degree < 0:
            raise InvalidArgumentError(f"flux degree must be >= 0, got {self.degree}")
        if self.components not in (1, 2):
            raise InvalidArgumentError(f"components must be 1 or 2, got {self.components}")

    @property
    def k_minus_1(self) -> int:
        return self.degree

    @property
    def basis(self) -> ModalFluxBasis:
        return reference_flux_basis(self.degree)

    @property
    def n_modes(self) -> int:
        return self.basis.n_modes

    @property
    def block_size(self) -> int:
        return self.components * self.n_modes

    @property
    def n_dofs(self) -> int:
        return self.mesh.n_cells * self.block_size

    def tabulate(self, rule: QuadratureRule) -> np.ndarray:
        """Physical scalar mode values (T, n_modes, nq) at the rule's points."""
        reference = self.basis.tabulate(rule.points)
        return reference[None, :, :] * ModalFluxBasis.cell_scale(self.mesh)[:, None, None]

    def cell_blocks(self, coeffs: np.ndarray) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.n_dofs,):
            raise InvalidArgumentError(f"expected {self.n_dofs} flux coefficients, got {coeffs.shape}")
        return coeffs.reshape(self.mesh.n_cells, self.components, self.n_modes)

    def values_at(self, coeffs: np.ndarray, rule: QuadratureRule) -> np.ndarray:
        """Field values (T, nq, components) at the rule's points."""
        return np.einsum("tdm,tmq->tqd", self.cell_blocks(coeffs), self.tabulate(rule))


def build_flux_space(mesh: Mesh, k: int) -> FluxSpace:
    return FluxSpace(mesh, k - 1, 2)


def project_l2(space: FluxSpace, field: Callable[[np.ndarray], np.ndarray], degree: int = None) -> np.ndarray:
    """Per-cell L2 projection; the basis is orthonormal so coefficients are plain moments."""
    degree = 2 * space.degree + SMOOTH_QUAD_OFFSET if degree is None else degree
    rule, points, weights = cell_quadrature(space.mesh, degree)
    values = np.asarray(field(points.reshape(-1, 2)), dtype=float)
    values = values.reshape(space.mesh.n_cells, rule.n_points, space.components)
    moments = np.einsum("tqd,tmq,tq->tdm", values, space.tabulate(rule), weights)
    return moments.reshape(-1)


def eval_flux(space: FluxSpace, coeffs: np.ndarray, cell: int, x) -> np.ndarray:
    """Values (n, components) of the broken field at points of one cell."""
    lam = space.mesh.barycentric(cell, x)
    modes = space.basis.tabulate(lam) * ModalFluxBasis.cell_scale(space.mesh)[cell]
    return (space.cell_blocks(coeffs)[cell] @ modes).T
