"""Nonconforming facet and bulk bubbles expressed in barycentric coordinates."""

import numpy as np

from app.exceptions import InvalidArgumentError
from mesh.core import Mesh
from polybasis.legendre import legendre_eval, legendre_table


def facet_bubble(k: int, lam_opposite):
    """S_k(1 - 2 lambda_F), lambda_F the coordinate of the vertex opposite F."""
    if k < 1:
        raise InvalidArgumentError(f"facet bubble needs k >= 1, got {k}")
    return legendre_eval(k, 1.0 - 2.0 * np.asarray(lam_opposite, dtype=float))


def bulk_bubble(k: int, lam):
    """1/2 (-1 + sum_i S_k(1 - 2 lambda_i)) for even k; lam has shape (..., 3)."""
    if k < 2 or k % 2:
        raise InvalidArgumentError(f"bulk bubble needs an even k >= 2, got {k}")
    lam = np.asarray(lam, dtype=float)
    values, _ = legendre_table(k, 1.0 - 2.0 * lam)
    return 0.5 * (-1.0 + values[k].sum(axis=-1))


def facet_bubble_eval(k: int, mesh: Mesh, cell: int, facet: int, x) -> np.ndarray:
    if facet not in (0, 1, 2):
        raise InvalidArgumentError(f"local facet index must be 0, 1 or 2, got {facet}")
    lam = mesh.barycentric(cell, x)
    return facet_bubble(k, lam[:, facet])


def bulk_bubble_eval(k: int, mesh: Mesh, cell: int, x) -> np.ndarray:
    if k < 2 or k % 2:
        raise InvalidArgumentError(f"bulk bubble needs an even k >= 2, got {k}")
    return bulk_bubble(k, mesh.barycentric(cell, x))
