from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from app.constants import SMOOTH_QUAD_OFFSET
from app.exceptions import InternalError
from polybasis.integrate import facet_quadrature
from polybasis.legendre import legendre_table
from polybasis.quadrature import quadrature_edge, quadrature_triangle
from spaces.cr import CrSpace, ScalarField
from spaces.local import bulk_exponents, evaluate_local, local_layout


def _quad_degree(k: int) -> int:
    return 2 * k + SMOOTH_QUAD_OFFSET


@lru_cache(maxsize=None)
def facet_moment_system(k: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Reference facet system on t in [-1, 1]: matrix A[j, i] = int trial_i S_j dt and
    the weighted test functions used for right-hand sides.

    Odd k: trials are the facet bubble trace (1) and the k - 1 modal traces, tests S_0..S_{k-1}.
    Even k: trials are the modal traces only, tests S_0..S_{k-2}.
    """
    layout = local_layout(k)
    rule = quadrature_edge(_quad_degree(k))
    t, w = rule.points, rule.weights
    tests = legendre_table(k - 1, t)[0]
    modal = np.array([0.25 * (1.0 - t * t) * p for p in legendre_table(max(k - 2, 0), t)[0][: k - 1]])
    if layout.even:
        trials = modal
        tests = tests[: k - 1]
    else:
        trials = np.vstack([np.ones_like(t)[None, :], modal]) if k > 1 else np.ones_like(t)[None, :]
    matrix = (tests * w) @ trials.T
    if np.linalg.cond(matrix) > 1e12:
        raise InternalError(f"facet moment system for k={k} is singular")
    weighted_tests = tests * w
    matrix.setflags(write=False)
    weighted_tests.setflags(write=False)
    return matrix, weighted_tests


def facet_coefficients(space: CrSpace, q: ScalarField, facets: Sequence[int]) -> np.ndarray:
    """
    Facet-attached coefficients matching the facet moments of q.

    Odd k: (nf, k), column 0 the bubble, then modal j = 1..k-1.
    Even k: (nf, k - 1) modal coefficients, the linear part taken from q at the endpoints.
    """
    k = space.k
    facets = np.asarray(facets, dtype=np.int64)
    if len(facets) == 0:
        return np.zeros((0, k if k % 2 else k - 1))
    matrix, weighted_tests = facet_moment_system(k)
    rule, points, _ = facet_quadrature(space.mesh, space.topo, facets, _quad_degree(k))
    values = np.asarray(q(points.reshape(-1, 2)), dtype=float).reshape(len(facets), -1)
    if k % 2 == 0:
        ends = space.topo.facets[facets]
        qa = np.asarray(q(space.mesh.vertices[ends[:, 0]]), dtype=float)
        qb = np.asarray(q(space.mesh.vertices[ends[:, 1]]), dtype=float)
        s = 0.5 * (1.0 + rule.points)
        values = values - qa[:, None] * (1.0 - s) - qb[:, None] * s
    rhs = values @ weighted_tests.T
    return np.linalg.solve(matrix, rhs.T).T


def facet_dof_indices(space: CrSpace, facets: Sequence[int]) -> np.ndarray:
    """Global indices laid out like facet_coefficients."""
    k = space.k
    facets = np.asarray(facets, dtype=np.int64)
    if k % 2:
        return facets[:, None] * k + np.arange(k)[None, :]
    return space.mesh.n_vertices + facets[:, None] * (k - 1) + np.arange(k - 1)[None, :]


@lru_cache(maxsize=None)
def _bulk_system(k: int):
    rule = quadrature_triangle(_quad_degree(k))
    lam = rule.points
    tests = np.array([lam[:, 1] ** a * lam[:, 2] ** b for a, b in bulk_exponents(k)])
    trials = np.array([lam[:, 0] * lam[:, 1] ** (a + 1) * lam[:, 2] ** (b + 1) for a, b in bulk_exponents(k)])
    weighted_tests = tests * rule.weights
    matrix = weighted_tests @ trials.T
    return rule, matrix, weighted_tests


def cr_interpolate(space: CrSpace, q: ScalarField) -> np.ndarray:
    """
    Modal CR interpolant of a smooth field.

    Facet moments against S_0..S_{k-1} (odd k) or vertex values plus moments
    S_0..S_{k-2} (even k) are matched first, then bulk moments against
    P_{k-3}; bulk bubble coefficients stay 0.
    """
    k = space.k
    mesh, topo = space.mesh, space.topo
    layout = local_layout(k)
    coeffs = np.zeros(space.n_dofs)

    if layout.even:
        coeffs[: mesh.n_vertices] = np.asarray(q(mesh.vertices), dtype=float)
    all_facets = np.arange(topo.n_facets)
    coeffs[facet_dof_indices(space, all_facets)] = facet_coefficients(space, q, all_facets)

    if layout.n_bulk:
        rule, matrix, weighted_tests = _bulk_system(k)
        points = mesh.to_physical(rule.points)
        target = np.asarray(q(points.reshape(-1, 2)), dtype=float).reshape(mesh.n_cells, -1)
        lam = np.broadcast_to(rule.points, (mesh.n_cells,) + rule.points.shape)
        values = evaluate_local(k, lam, space.flips)
        current = np.einsum("tl,tlq->tq", space.local_coefficients(coeffs), values)
        rhs = (target - current) @ weighted_tests.T
        bulk = np.linalg.solve(matrix, rhs.T).T
        coeffs[space.cell_dofs[:, layout.bulk_start : layout.bulk_start + layout.n_bulk]] = bulk
    return coeffs
