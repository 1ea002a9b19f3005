import dataclasses
from typing import Optional

import numpy as np

from app.exceptions import InvalidArgumentError
from spaces.cr import CrSpace, ScalarField
from spaces.interpolation import facet_coefficients, facet_dof_indices
from utils.logger import get_logger

logger = get_logger(__name__)


def _zero(points: np.ndarray) -> np.ndarray:
    return np.zeros(len(points))


def apply_dirichlet(space: CrSpace, g_D: Optional[ScalarField]) -> CrSpace:
    """
    Fix the facet-attached DoFs of every Dirichlet facet from g_D.

    Odd k: the bubble and modal coefficients solve the k x k facet moment system.
    Even k: the endpoint vertex values are g_D at the vertices and the modal
    coefficients match the moments S_0..S_{k-2} of the remainder.
    Returns a new space; the input is unchanged.
    """
    facets = space.topo.dirichlet
    if len(facets) == 0:
        raise InvalidArgumentError("apply_dirichlet needs at least one Dirichlet facet")
    g_D = g_D or _zero
    k = space.k

    dofs = []
    values = []
    if k % 2 == 0:
        vertices = np.unique(space.topo.facets[facets])
        dofs.append(vertices)
        values.append(np.asarray(g_D(space.mesh.vertices[vertices]), dtype=float))
    dofs.append(facet_dof_indices(space, facets).ravel())
    values.append(facet_coefficients(space, g_D, facets).ravel())

    dofs = np.concatenate(dofs)
    values = np.concatenate(values)
    order = np.argsort(dofs, kind="stable")
    dofs, values = dofs[order], values[order]
    dofs.setflags(write=False)
    values.setflags(write=False)
    logger.debug(f"Dirichlet: {len(facets)} facets, {len(dofs)} fixed DoFs")
    return dataclasses.replace(space, dirichlet_dofs=dofs, dirichlet_values=values)
