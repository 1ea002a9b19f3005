from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from app.constants import BasisKind
from app.exceptions import InvalidArgumentError
from mesh.core import Mesh
from mesh.topology import FacetTopology
from spaces.local import LocalLayout, facet_flips, local_layout
from utils.logger import get_logger

logger = get_logger(__name__)

ScalarField = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class BoundaryData:
    """Dirichlet datum g_D(points (n, 2)) -> (n,); None means homogeneous."""

    g_D: Optional[ScalarField] = None


@dataclass(frozen=True, eq=False)
class CrSpace:
    """
    Global Crouzeix-Raviart space of order k.

    cell_dofs[c, slot] is the global index of local function `slot` of cell c,
    or -1 for the removed bulk bubble. Coefficient vectors always have length
    n_dofs, Dirichlet entries included.
    """

    mesh: Mesh
    topo: FacetTopology
    k: int
    n_dofs: int
    cell_dofs: np.ndarray
    flips: np.ndarray
    removed_bubble: Optional[int] = None
    dirichlet_dofs: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    dirichlet_values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def layout(self) -> LocalLayout:
        return local_layout(self.k)

    @property
    def has_mean_constraint(self) -> bool:
        return self.topo.pure_neumann

    @cached_property
    def free_dofs(self) -> np.ndarray:
        mask = np.ones(self.n_dofs, dtype=bool)
        mask[self.dirichlet_dofs] = False
        return np.flatnonzero(mask)

    @cached_property
    def dof_table(self) -> Dict[Tuple[BasisKind, int, int], int]:
        """(kind, owner entity, mode) -> global index."""
        layout = self.layout
        table = {}
        for slot in range(layout.n_local):
            kind = layout.slot_kind(slot)
            if kind == BasisKind.LAGRANGE_VERTEX:
                owners, mode = self.mesh.cells[:, slot], 0
            elif kind == BasisKind.FACET_BUBBLE:
                owners, mode = self.topo.cell_facets[:, slot], 0
            elif kind == BasisKind.LAGRANGE_FACET_MODAL:
                facet, j = divmod(slot - layout.modal_start, layout.n_modal)
                owners, mode = self.topo.cell_facets[:, facet], j + 1
            elif kind == BasisKind.LAGRANGE_BULK_MODAL:
                owners, mode = np.arange(self.mesh.n_cells), slot - layout.bulk_start
            else:
                owners, mode = np.arange(self.mesh.n_cells), 0
            for owner, dof in zip(owners, self.cell_dofs[:, slot]):
                if dof >= 0:
                    table[(kind, int(owner), mode)] = int(dof)
        return table

    def full_vector(self, free_values: np.ndarray) -> np.ndarray:
        """Scatter free-DoF values into a full coefficient vector with Dirichlet values."""
        coeffs = np.zeros(self.n_dofs)
        coeffs[self.free_dofs] = free_values
        coeffs[self.dirichlet_dofs] = self.dirichlet_values
        return coeffs

    def local_coefficients(self, coeffs: np.ndarray) -> np.ndarray:
        """(T, n_local) coefficients per cell, 0 on the removed bubble."""
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.n_dofs,):
            raise InvalidArgumentError(f"expected {self.n_dofs} CR coefficients, got {coeffs.shape}")
        padded = np.append(coeffs, 0.0)
        return padded[self.cell_dofs]


def _dof_numbering(mesh: Mesh, topo: FacetTopology, k: int, remove_bubble: bool):
    layout = local_layout(k)
    n_cells, n_facets, n_vertices = mesh.n_cells, topo.n_facets, mesh.n_vertices
    nb = layout.n_bulk
    cell_dofs = np.empty((n_cells, layout.n_local), dtype=np.int64)
    cf = topo.cell_facets

    if layout.even:
        cell_dofs[:, :3] = mesh.cells
        for f in range(3):
            for j in range(1, k):
                cell_dofs[:, layout.modal_slot(f, j)] = n_vertices + cf[:, f] * (k - 1) + (j - 1)
        bulk_base = n_vertices + (k - 1) * n_facets
    else:
        cell_dofs[:, :3] = cf * k
        for f in range(3):
            for j in range(1, k):
                cell_dofs[:, layout.modal_slot(f, j)] = cf[:, f] * k + j
        bulk_base = k * n_facets

    cells = np.arange(n_cells)
    for offset in range(nb):
        cell_dofs[:, layout.bulk_start + offset] = bulk_base + cells * nb + offset
    n_dofs = bulk_base + n_cells * nb

    removed = None
    if layout.even:
        if remove_bubble:
            removed = 0
            bubbles = np.where(cells == removed, -1, n_dofs + cells - 1)
            n_dofs += n_cells - 1
        else:
            bubbles = n_dofs + cells
            n_dofs += n_cells
        cell_dofs[:, layout.bubble_slot] = bubbles
    return cell_dofs, int(n_dofs), removed


def build_cr_space(
    mesh: Mesh,
    topo: FacetTopology,
    k: int,
    bc: Optional[BoundaryData] = None,
    remove_bubble: bool = True,
) -> CrSpace:
    """
    Build CR_k on `mesh`. For even k the bulk bubble of cell 0 is dropped
    (the bubbles of all cells sum to a continuous function). Dirichlet facets
    of `topo` get their facet DoFs fixed from bc.g_D (zero if absent).
    """
    if int(k) != k or k < 1:
        raise InvalidArgumentError(f"CR order must be an integer >= 1, got {k}")
    k = int(k)
    cell_dofs, n_dofs, removed = _dof_numbering(mesh, topo, k, remove_bubble)
    cell_dofs.setflags(write=False)
    flips = facet_flips(mesh.cells)
    flips.setflags(write=False)
    space = CrSpace(mesh, topo, k, n_dofs, cell_dofs, flips, removed)

    if not topo.pure_neumann:
        from spaces.dirichlet import apply_dirichlet

        space = apply_dirichlet(space, (bc or BoundaryData()).g_D)

    logger.info(
        f"CR_{k} space: {space.n_dofs} DoFs ({len(space.dirichlet_dofs)} Dirichlet), "
        f"{'zero-mean constraint' if space.has_mean_constraint else 'no mean constraint'}"
    )
    return space
