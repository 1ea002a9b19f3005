import numpy as np
import pytest

from mesh.structured import generate_structured_mesh
from mesh.topology import all_neumann, build_facets, mixed_rule


def random_cell_points(mesh, n_per_cell=4, seed=0):
    """(T, n, 2) random interior points of every cell."""
    rng = np.random.default_rng(seed)
    bary = rng.dirichlet(np.ones(3), size=(mesh.n_cells, n_per_cell))
    return mesh.to_physical(bary)


def polynomial(degree, seed=0):
    """Random bivariate polynomial of total degree `degree` with its gradient."""
    rng = np.random.default_rng(seed)
    terms = [(a, d - a) for d in range(degree + 1) for a in range(d + 1)]
    coeffs = rng.uniform(-1.0, 1.0, len(terms))

    def value(points):
        x, y = points[:, 0], points[:, 1]
        return sum(c * x**a * y**b for c, (a, b) in zip(coeffs, terms))

    def gradient(points):
        x, y = points[:, 0], points[:, 1]
        gx = sum(c * a * x ** max(a - 1, 0) * y**b for c, (a, b) in zip(coeffs, terms))
        gy = sum(c * b * x**a * y ** max(b - 1, 0) for c, (a, b) in zip(coeffs, terms))
        return np.column_stack([gx + 0.0 * x, gy + 0.0 * y])

    return value, gradient


@pytest.fixture(scope="module")
def mesh2():
    return generate_structured_mesh(2, 2)


@pytest.fixture(scope="module")
def mesh4():
    return generate_structured_mesh(4, 4)


@pytest.fixture(scope="module")
def neumann2(mesh2):
    return build_facets(mesh2, all_neumann)


@pytest.fixture(scope="module")
def mixed2(mesh2):
    return build_facets(mesh2, mixed_rule(mesh2.domain_box))
