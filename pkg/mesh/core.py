from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from app.constants import BARYCENTRIC_TOL
from app.exceptions import DomainError, InvalidArgumentError, InvalidMeshError, MeshIndexError


class Box(NamedTuple):
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def area(self) -> float:
        return self.width * self.height


def make_box(xmin: float, xmax: float, ymin: float, ymax: float) -> Box:
    if not (xmax > xmin and ymax > ymin):
        raise InvalidArgumentError(f"degenerate box ({xmin}, {xmax}) x ({ymin}, {ymax})")
    return Box(float(xmin), float(xmax), float(ymin), float(ymax))


def signed_areas(vertices: np.ndarray, cells: np.ndarray) -> np.ndarray:
    x0 = vertices[cells[:, 0]]
    e1 = vertices[cells[:, 1]] - x0
    e2 = vertices[cells[:, 2]] - x0
    return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])


@dataclass(frozen=True, eq=False)
class Mesh:
    """
    Conforming triangulation with counterclockwise cells.

    Arrays are frozen on construction; derived geometry is computed on demand.
    """

    vertices: np.ndarray
    cells: np.ndarray
    domain_box: Box

    def __post_init__(self):
        vertices = np.ascontiguousarray(self.vertices, dtype=float)
        cells = np.ascontiguousarray(self.cells, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[1] != 2:
            raise InvalidMeshError(f"vertices must have shape (V, 2), got {vertices.shape}")
        if cells.ndim != 2 or cells.shape[1] != 3 or len(cells) == 0:
            raise InvalidMeshError(f"cells must have shape (T, 3) with T >= 1, got {cells.shape}")
        if cells.min() < 0 or cells.max() >= len(vertices):
            bad = int(cells.max() if cells.max() >= len(vertices) else cells.min())
            raise MeshIndexError(f"cell references vertex {bad} of {len(vertices)}")
        areas = signed_areas(vertices, cells)
        if np.any(areas <= 0.0):
            cell = int(np.argmin(areas))
            raise InvalidMeshError(
                f"cell {cell} has non-positive signed area {areas[cell]:.3e}"
            )
        vertices.setflags(write=False)
        cells.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "cells", cells)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def areas(self) -> np.ndarray:
        return signed_areas(self.vertices, self.cells)

    def edge_lengths(self) -> np.ndarray:
        """(T, 3) lengths, column i is the edge opposite local vertex i."""
        x = self.vertices[self.cells]
        lengths = np.empty((self.n_cells, 3))
        for i in range(3):
            d = x[:, (i + 2) % 3] - x[:, (i + 1) % 3]
            lengths[:, i] = np.hypot(d[:, 0], d[:, 1])
        return lengths

    @property
    def diameters(self) -> np.ndarray:
        return self.edge_lengths().max(axis=1)

    @property
    def inradii(self) -> np.ndarray:
        return 2.0 * self.areas / self.edge_lengths().sum(axis=1)

    @property
    def h(self) -> float:
        return float(self.diameters.max())

    @property
    def centroids(self) -> np.ndarray:
        return self.vertices[self.cells].mean(axis=1)

    def grad_barycentric(self) -> np.ndarray:
        """(T, 3, 2) constant gradients of the barycentric coordinates."""
        x = self.vertices[self.cells]
        jac = np.stack([x[:, 1] - x[:, 0], x[:, 2] - x[:, 0]], axis=2)  # columns e1, e2
        inv = np.linalg.inv(jac)
        grads = np.empty((self.n_cells, 3, 2))
        grads[:, 1] = inv[:, 0]
        grads[:, 2] = inv[:, 1]
        grads[:, 0] = -grads[:, 1] - grads[:, 2]
        return grads

    def to_physical(self, bary: np.ndarray, cells=None) -> np.ndarray:
        """Map barycentric points (nq, 3) or (n, nq, 3) to physical coordinates."""
        x = self.vertices[self.cells if cells is None else self.cells[cells]]
        if bary.ndim == 2:
            return np.einsum("qi,tid->tqd", bary, x)
        return np.einsum("tqi,tid->tqd", bary, x)

    def barycentric(self, cell: int, points) -> np.ndarray:
        """Barycentric coordinates of `points` (n, 2) in `cell`; DomainError if outside."""
        if not 0 <= cell < self.n_cells:
            raise DomainError(f"cell {cell} not in mesh of {self.n_cells} cells")
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        x = self.vertices[self.cells[cell]]
        jac = np.column_stack([x[1] - x[0], x[2] - x[0]])
        lam12 = np.linalg.solve(jac, (pts - x[0]).T).T
        lam = np.column_stack([1.0 - lam12.sum(axis=1), lam12])
        if np.any(lam < -BARYCENTRIC_TOL):
            raise DomainError(f"point(s) {pts[np.any(lam < -BARYCENTRIC_TOL, axis=1)]} outside cell {cell}")
        return lam


def shape_regularity(mesh: Mesh) -> float:
    """Max over cells of diameter / inradius."""
    inradii = mesh.inradii
    if np.any(inradii <= 0.0) or not np.all(np.isfinite(inradii)):
        raise InvalidMeshError("degenerate cell: zero inradius")
    return float(np.max(mesh.diameters / inradii))
