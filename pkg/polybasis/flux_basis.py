from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from scipy.linalg import cholesky, solve_triangular
from scipy.special import eval_jacobi

from app.constants import BasisKind
from app.exceptions import InvalidArgumentError
from mesh.core import Mesh
from polybasis.local_basis import LocalBasis
from polybasis.quadrature import quadrature_triangle


def n_modes(degree: int) -> int:
    return (degree + 1) * (degree + 2) // 2


def mode_indices(degree: int) -> List[Tuple[int, int]]:
    return [(a, d - a) for d in range(degree + 1) for a in range(d, -1, -1)]


def _dubiner(degree: int, bary: np.ndarray) -> np.ndarray:
    """
    Collapsed-coordinate products on the reference triangle, (n_modes, nq).

    (1 - y)^a S_a((2x - 1 + y) / (1 - y)) is evaluated through its homogeneous
    recurrence so the collapsed vertex y = 1 is harmless.
    """
    x = bary[..., 1]
    y = bary[..., 2]
    u = 2.0 * x - 1.0 + y
    v = 1.0 - y
    scaled = [np.ones_like(x)]
    if degree >= 1:
        scaled.append(u)
    for j in range(1, degree):
        scaled.append(((2 * j + 1) * u * scaled[j] - j * v * v * scaled[j - 1]) / (j + 1))
    values = [scaled[a] * eval_jacobi(b, 2 * a + 1, 0, 2.0 * y - 1.0) for a, b in mode_indices(degree)]
    return np.array(values)


@dataclass(frozen=True, eq=False)
class ModalFluxBasis:
    """Scalar P_degree basis, L2-orthonormal on the reference triangle."""

    degree: int
    coefficients: np.ndarray

    @property
    def n_modes(self) -> int:
        return n_modes(self.degree)

    def tabulate(self, bary: np.ndarray) -> np.ndarray:
        """Reference values at barycentric points (..., 3) -> (n_modes, ...)."""
        raw = _dubiner(self.degree, np.asarray(bary, dtype=float))
        return np.tensordot(self.coefficients, raw, axes=1)

    @staticmethod
    def cell_scale(mesh: Mesh) -> np.ndarray:
        """Per-cell factor making the mapped basis orthonormal on the physical cell."""
        return 1.0 / np.sqrt(2.0 * mesh.areas)


@lru_cache(maxsize=None)
def reference_flux_basis(degree: int) -> ModalFluxBasis:
    if degree < 0:
        raise InvalidArgumentError(f"flux degree must be >= 0, got {degree}")
    rule = quadrature_triangle(2 * degree)
    raw = _dubiner(degree, rule.points)
    gram = (raw * rule.weights) @ raw.T
    lower = cholesky(gram, lower=True)
    coefficients = solve_triangular(lower, np.eye(len(gram)), lower=True)
    coefficients.setflags(write=False)
    return ModalFluxBasis(degree, coefficients)


@dataclass(frozen=True, eq=False)
class CellModalBasis:
    cell: int
    functions: Tuple[LocalBasis, ...]
    reference: ModalFluxBasis
    mesh: Mesh

    def eval(self, x) -> np.ndarray:
        """Scalar mode values at physical points, shape (n_modes, n_points)."""
        lam = self.mesh.barycentric(self.cell, x)
        scale = 1.0 / np.sqrt(2.0 * self.mesh.areas[self.cell])
        return self.reference.tabulate(lam) * scale


def modal_flux_basis(mesh: Mesh, cell: int, k_minus_1: int) -> CellModalBasis:
    """Vector basis on one cell: the scalar orthonormal modes times the two Cartesian directions."""
    reference = reference_flux_basis(k_minus_1)
    functions = tuple(
        LocalBasis(BasisKind.FLUX_MODAL, k_minus_1, cell, d * reference.n_modes + m)
        for d in range(2)
        for m in range(reference.n_modes)
    )
    return CellModalBasis(cell, functions, reference, mesh)
