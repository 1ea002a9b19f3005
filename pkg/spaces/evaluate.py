from typing import Sequence, Tuple

import numpy as np

from polybasis.integrate import facet_barycentric
from polybasis.quadrature import QuadratureRule
from spaces.cr import CrSpace
from spaces.local import evaluate_local, physical_gradients


def eval_cr(space: CrSpace, coeffs: np.ndarray, cell: int, x) -> np.ndarray:
    lam = space.mesh.barycentric(cell, x)
    values = evaluate_local(space.k, lam[None], space.flips[cell : cell + 1])
    return space.local_coefficients(coeffs)[cell] @ values[0]


def eval_cr_grad(space: CrSpace, coeffs: np.ndarray, cell: int, x) -> np.ndarray:
    """Broken gradient (n, 2) at points of one cell."""
    lam = space.mesh.barycentric(cell, x)
    _, dlam = evaluate_local(space.k, lam[None], space.flips[cell : cell + 1], derivatives=True)
    grads = physical_gradients(dlam, space.mesh.grad_barycentric()[cell : cell + 1])
    return np.einsum("l,lqd->qd", space.local_coefficients(coeffs)[cell], grads[0])


def tabulate_cells(space: CrSpace, rule: QuadratureRule, derivatives: bool = False):
    """Local basis values (T, n_local, nq) and optionally gradients (T, n_local, nq, 2)."""
    lam = np.broadcast_to(rule.points, (space.mesh.n_cells,) + rule.points.shape)
    if not derivatives:
        return evaluate_local(space.k, lam, space.flips)
    values, dlam = evaluate_local(space.k, lam, space.flips, derivatives=True)
    return values, physical_gradients(dlam, space.mesh.grad_barycentric())


def cell_fields(space: CrSpace, coeffs: np.ndarray, rule: QuadratureRule) -> Tuple[np.ndarray, np.ndarray]:
    """Values (T, nq) and broken gradients (T, nq, 2) of a CR function."""
    values, grads = tabulate_cells(space, rule, derivatives=True)
    local = space.local_coefficients(coeffs)
    return np.einsum("tl,tlq->tq", local, values), np.einsum("tl,tlqd->tqd", local, grads)


def facet_traces(
    space: CrSpace, coeffs: np.ndarray, facets: Sequence[int], rule: QuadratureRule
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Traces (nf, nq) from the lower-index cell and from the other cell; the second
    is zero on boundary facets, so their difference is the jump everywhere.
    """
    facets = np.asarray(facets, dtype=np.int64)
    local = space.local_coefficients(coeffs)
    traces = []
    for side in (0, 1):
        out = np.zeros((len(facets), rule.n_points))
        present = space.topo.facet_cells[facets, side] >= 0
        if np.any(present):
            lam, cells = facet_barycentric(space.mesh, space.topo, facets[present], side, rule)
            values = evaluate_local(space.k, lam, space.flips[cells])
            out[present] = np.einsum("nl,nlq->nq", local[cells], values)
        traces.append(out)
    return traces[0], traces[1]
