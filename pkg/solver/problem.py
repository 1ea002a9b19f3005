from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix

from app.constants import BoundaryKind
from app.exceptions import InvalidArgumentError
from assembly.blocks import assemble_nonlinear_mass, weight_degree
from assembly.system import SaddleSystem, assemble_saddle_system
from cases.manufactured import ManufacturedCase
from mesh.core import Mesh
from mesh.topology import FacetTopology, all_neumann, build_facets, mixed_rule
from spaces.cr import BoundaryData, CrSpace, build_cr_space
from spaces.flux import FluxSpace, build_flux_space
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class DarcyForchheimerProblem:
    """Discrete problem of order k: spaces, linear saddle blocks and the nonlinear parameters."""

    case: ManufacturedCase
    mesh: Mesh
    topo: FacetTopology
    flux: FluxSpace
    cr: CrSpace
    system: SaddleSystem
    k: int

    @property
    def alpha(self) -> float:
        return self.case.alpha

    @property
    def beta_over_rho(self) -> float:
        return self.case.beta_over_rho

    def nonlinear_block(self, u: np.ndarray, degree: Optional[int] = None) -> csr_matrix:
        return assemble_nonlinear_mass(
            self.flux, u, self.alpha, self.beta_over_rho, weight_degree(self.k) if degree is None else degree
        )


def build_problem(
    case: ManufacturedCase,
    mesh: Mesh,
    k: int,
    boundary: str = BoundaryKind.PURE_NEUMANN,
    compatibility: str = "error",
) -> DarcyForchheimerProblem:
    if boundary == BoundaryKind.PURE_NEUMANN:
        tag_rule = all_neumann
    elif boundary == BoundaryKind.MIXED:
        tag_rule = mixed_rule(mesh.domain_box)
    else:
        raise InvalidArgumentError(f"unknown boundary kind {boundary!r}")

    topo = build_facets(mesh, tag_rule)
    cr = build_cr_space(mesh, topo, k, BoundaryData(case.g_D))
    flux = build_flux_space(mesh, k)
    system = assemble_saddle_system(
        flux, cr, case.kinv, case.mu_over_rho, case.f, case.b, case.g_N, compatibility
    )
    return DarcyForchheimerProblem(case, mesh, topo, flux, cr, system, k)
