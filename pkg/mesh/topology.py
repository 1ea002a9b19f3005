from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from app.constants import FacetTag
from app.exceptions import InvalidArgumentError, StructuralError
from mesh.core import Box, Mesh
from utils.logger import get_logger

logger = get_logger(__name__)

# maps a boundary facet midpoint (x, y) to FacetTag.DIRICHLET or FacetTag.NEUMANN
TagRule = Callable[[np.ndarray], FacetTag]


def _local_edges(cells: np.ndarray) -> np.ndarray:
    """(T, 3, 2) vertex pairs, local edge i opposite local vertex i."""
    return np.stack([cells[:, [1, 2]], cells[:, [2, 0]], cells[:, [0, 1]]], axis=1)


def _unique_edges(cells: np.ndarray):
    edges = np.sort(_local_edges(cells).reshape(-1, 2), axis=1)
    return np.unique(edges, axis=0, return_inverse=True, return_counts=True)


def check_conformity(mesh: Mesh) -> None:
    """Raise StructuralError on edges shared by more than two cells or on hanging nodes."""
    facets, _, counts = _unique_edges(mesh.cells)
    if np.any(counts > 2):
        bad = facets[np.argmax(counts > 2)]
        raise StructuralError(f"edge {tuple(bad)} is shared by more than two cells")

    # an interior T-junction leaves the long edge without a partner cell, so
    # scanning count-1 edges also covers hanging nodes away from the boundary
    boundary = facets[counts == 1]
    a = mesh.vertices[boundary[:, 0]]
    b = mesh.vertices[boundary[:, 1]]
    t = b - a
    length2 = np.einsum("ed,ed->e", t, t)
    scale = np.sqrt(length2)
    # vertices strictly inside a boundary edge segment mark a hanging node
    rel = mesh.vertices[None, :, :] - a[:, None, :]
    along = np.einsum("evd,ed->ev", rel, t) / length2[:, None]
    cross = np.abs(rel[..., 0] * t[:, None, 1] - rel[..., 1] * t[:, None, 0]) / scale[:, None]
    inside = (cross <= 1e-12 * scale[:, None]) & (along > 1e-12) & (along < 1 - 1e-12)
    if np.any(inside):
        e, v = np.argwhere(inside)[0]
        raise StructuralError(
            f"vertex {v} lies inside edge {tuple(boundary[e])}: hanging node"
        )


@dataclass(frozen=True, eq=False)
class FacetTopology:
    """
    Facet list sorted lexicographically by (low vertex, high vertex).

    facet_cells[:, 0] is the lower-index cell, facet_cells[:, 1] is -1 on the boundary.
    Normals point from the lower-index cell into the higher one, outward on the boundary.
    """

    facets: np.ndarray
    facet_cells: np.ndarray
    facet_local: np.ndarray
    cell_facets: np.ndarray
    normals: np.ndarray
    lengths: np.ndarray
    midpoints: np.ndarray
    tags: np.ndarray

    @property
    def n_facets(self) -> int:
        return len(self.facets)

    @property
    def interior(self) -> np.ndarray:
        return np.flatnonzero(self.tags == FacetTag.INTERIOR)

    @property
    def boundary(self) -> np.ndarray:
        return np.flatnonzero(self.tags != FacetTag.INTERIOR)

    @property
    def dirichlet(self) -> np.ndarray:
        return np.flatnonzero(self.tags == FacetTag.DIRICHLET)

    @property
    def neumann(self) -> np.ndarray:
        return np.flatnonzero(self.tags == FacetTag.NEUMANN)

    @property
    def pure_neumann(self) -> bool:
        return len(self.dirichlet) == 0


def build_facets(mesh: Mesh, tag_rule: TagRule) -> FacetTopology:
    cells = mesh.cells
    n_cells = mesh.n_cells
    facets, inverse, counts = _unique_edges(cells)
    inverse = inverse.ravel()
    if np.any(counts > 2):
        raise StructuralError("nonconforming mesh: edge shared by more than two cells")

    cell_facets = inverse.reshape(n_cells, 3)
    n_facets = len(facets)
    # flattened index c*3+i grows with c, so a stable sort keeps the lower cell first
    order = np.argsort(inverse, kind="stable")
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    first = order[starts]
    second = np.where(counts == 2, order[np.minimum(starts + 1, len(order) - 1)], -1)

    facet_cells = np.column_stack([first // 3, np.where(second >= 0, second // 3, -1)])
    facet_local = np.column_stack([first % 3, np.where(second >= 0, second % 3, -1)])

    a = mesh.vertices[facets[:, 0]]
    b = mesh.vertices[facets[:, 1]]
    t = b - a
    lengths = np.hypot(t[:, 0], t[:, 1])
    normals = np.column_stack([t[:, 1], -t[:, 0]]) / lengths[:, None]
    midpoints = 0.5 * (a + b)
    outward = np.einsum("ed,ed->e", normals, midpoints - mesh.centroids[facet_cells[:, 0]])
    normals[outward < 0] *= -1.0

    tags = np.full(n_facets, FacetTag.INTERIOR, dtype=np.int8)
    for facet in np.flatnonzero(counts == 1):
        tag = FacetTag(tag_rule(midpoints[facet]))
        if tag == FacetTag.INTERIOR:
            raise InvalidArgumentError(
                f"tag rule returned INTERIOR for boundary facet {facet} at {midpoints[facet]}"
            )
        tags[facet] = tag

    for array in (facets, facet_cells, facet_local, cell_facets, normals, lengths, midpoints, tags):
        array.setflags(write=False)
    topo = FacetTopology(facets, facet_cells, facet_local, cell_facets, normals, lengths, midpoints, tags)
    logger.debug(
        f"Facets: {n_facets} total, {len(topo.interior)} interior, "
        f"{len(topo.dirichlet)} Dirichlet, {len(topo.neumann)} Neumann"
    )
    return topo


def all_neumann(_midpoint) -> FacetTag:
    return FacetTag.NEUMANN


def all_dirichlet(_midpoint) -> FacetTag:
    return FacetTag.DIRICHLET


SIDES = ("left", "right", "bottom", "top")


def sides_rule(box: Box, dirichlet_sides: Iterable[str], tol: float = 1e-12) -> TagRule:
    """Tag facets whose midpoint lies on one of the named box sides as Dirichlet."""
    dirichlet_sides = tuple(dirichlet_sides)
    unknown = set(dirichlet_sides) - set(SIDES)
    if unknown:
        raise InvalidArgumentError(f"unknown box sides {sorted(unknown)}; expected {SIDES}")
    scale = tol * max(box.width, box.height)

    def rule(midpoint) -> FacetTag:
        x, y = midpoint
        on_side = {
            "left": abs(x - box.xmin) <= scale,
            "right": abs(x - box.xmax) <= scale,
            "bottom": abs(y - box.ymin) <= scale,
            "top": abs(y - box.ymax) <= scale,
        }
        if any(on_side[side] for side in dirichlet_sides):
            return FacetTag.DIRICHLET
        return FacetTag.NEUMANN

    return rule


def mixed_rule(box: Box) -> TagRule:
    """Dirichlet on the left and bottom sides, Neumann elsewhere."""
    return sides_rule(box, ("left", "bottom"))
