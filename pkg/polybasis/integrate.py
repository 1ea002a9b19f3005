from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from mesh.core import Mesh
from mesh.topology import FacetTopology
from polybasis.quadrature import QuadratureRule, quadrature_edge, quadrature_triangle


def cell_quadrature(mesh: Mesh, degree: int) -> Tuple[QuadratureRule, np.ndarray, np.ndarray]:
    """Rule, physical points (T, nq, 2) and physical weights (T, nq)."""
    rule = quadrature_triangle(degree)
    points = mesh.to_physical(rule.points)
    weights = 2.0 * mesh.areas[:, None] * rule.weights[None, :]
    return rule, points, weights


def facet_quadrature(
    mesh: Mesh, topo: FacetTopology, facets: Sequence[int], degree: int
) -> Tuple[QuadratureRule, np.ndarray, np.ndarray]:
    """
    Rule, physical points (nf, nq, 2) and weights (nf, nq) on the given facets.

    Facets are parametrized from their lower global vertex (t = -1) to the higher (t = 1).
    """
    rule = quadrature_edge(degree)
    facets = np.asarray(facets, dtype=np.int64)
    a = mesh.vertices[topo.facets[facets, 0]]
    b = mesh.vertices[topo.facets[facets, 1]]
    s = 0.5 * (1.0 + rule.points)
    points = a[:, None, :] + s[None, :, None] * (b - a)[:, None, :]
    weights = 0.5 * topo.lengths[facets, None] * rule.weights[None, :]
    return rule, points, weights


def facet_barycentric(
    mesh: Mesh, topo: FacetTopology, facets: Sequence[int], side: int, rule: QuadratureRule
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Barycentric coordinates (nf, nq, 3) of facet quadrature points inside the
    cell on `side` (0 lower-index cell, 1 other cell), and those cell ids.
    """
    facets = np.asarray(facets, dtype=np.int64)
    cells = topo.facet_cells[facets, side]
    local = topo.facet_local[facets, side]
    s = 0.5 * (1.0 + rule.points)
    lam = np.zeros((len(facets), rule.n_points, 3))
    cell_vertices = mesh.cells[cells]
    rows = np.arange(len(facets))
    for offset in (1, 2):
        position = (local + offset) % 3
        vertex = cell_vertices[rows, position]
        is_low = vertex == topo.facets[facets, 0]
        lam[rows, :, position] = np.where(is_low[:, None], 1.0 - s[None, :], s[None, :])
    return lam, cells


def integrate_cells(mesh: Mesh, fn: Callable[[np.ndarray], np.ndarray], degree: int) -> float:
    """Integral over the mesh of a scalar callback fn(points (n, 2)) -> (n,)."""
    _, points, weights = cell_quadrature(mesh, degree)
    values = np.asarray(fn(points.reshape(-1, 2)), dtype=float).reshape(weights.shape)
    return float(np.sum(values * weights))


def integrate_facets(
    mesh: Mesh,
    topo: FacetTopology,
    fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    degree: int,
    facets: Optional[Sequence[int]] = None,
) -> float:
    """Integral of fn(points, normals) over the given facets (default: the whole boundary)."""
    facets = topo.boundary if facets is None else np.asarray(facets, dtype=np.int64)
    if len(facets) == 0:
        return 0.0
    _, points, weights = facet_quadrature(mesh, topo, facets, degree)
    normals = np.repeat(topo.normals[facets], points.shape[1], axis=0)
    values = np.asarray(fn(points.reshape(-1, 2), normals), dtype=float).reshape(weights.shape)
    return float(np.sum(values * weights))
