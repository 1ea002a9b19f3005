import numpy as np
import pytest

from app.constants import SMOOTH_QUAD_OFFSET, BasisKind
from app.exceptions import InvalidArgumentError
from assembly.blocks import assemble_cr_mass
from measures.norms import lp_norm
from measures.rates import fit_rate
from mesh.structured import generate_structured_mesh
from mesh.topology import all_neumann, build_facets
from polybasis.integrate import cell_quadrature, facet_quadrature
from polybasis.legendre import legendre_table
from polybasis.quadrature import quadrature_edge, quadrature_triangle
from spaces.cr import BoundaryData, build_cr_space
from spaces.evaluate import cell_fields, eval_cr, eval_cr_grad, facet_traces
from spaces.flux import build_flux_space, eval_flux, project_l2
from spaces.interpolation import cr_interpolate, facet_dof_indices
from tests.conftest import polynomial, random_cell_points


@pytest.mark.parametrize("k, n_dofs", [(1, 16), (2, 32), (3, 56), (4, 88)])
def test_dof_counts(mesh2, neumann2, k, n_dofs):
    # odd k: k E + T nb; even k: V + (k - 1) E + T nb + T - 1
    space = build_cr_space(mesh2, neumann2, k)
    assert space.n_dofs == n_dofs
    assert len(space.dof_table) == n_dofs
    assert space.has_mean_constraint


def test_even_order_drops_one_bubble(mesh2, neumann2):
    space = build_cr_space(mesh2, neumann2, 2)
    assert space.removed_bubble == 0
    assert space.cell_dofs[0, space.layout.bubble_slot] == -1
    kinds = [kind for kind, _, _ in space.dof_table]
    assert kinds.count(BasisKind.BULK_BUBBLE) == mesh2.n_cells - 1


def test_rejects_bad_order(mesh2, neumann2):
    with pytest.raises(InvalidArgumentError):
        build_cr_space(mesh2, neumann2, 0)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_interpolant_reproduces_polynomials(mesh2, neumann2, k):
    space = build_cr_space(mesh2, neumann2, k)
    value, gradient = polynomial(k, seed=k)
    coeffs = cr_interpolate(space, value)
    points = random_cell_points(mesh2, seed=k)
    for cell in range(mesh2.n_cells):
        np.testing.assert_allclose(eval_cr(space, coeffs, cell, points[cell]), value(points[cell]), atol=1e-11)
        np.testing.assert_allclose(
            eval_cr_grad(space, coeffs, cell, points[cell]), gradient(points[cell]), atol=1e-10
        )


@pytest.mark.parametrize("k", [1, 3, 5])
def test_constant_on_odd_order_lives_on_facet_bubbles(mesh2, neumann2, k):
    space = build_cr_space(mesh2, neumann2, k)
    coeffs = cr_interpolate(space, lambda p: np.ones(len(p)))
    facet_dofs = facet_dof_indices(space, np.arange(neumann2.n_facets))
    np.testing.assert_allclose(coeffs[facet_dofs[:, 0]], 1.0, atol=1e-13)
    np.testing.assert_allclose(coeffs[facet_dofs[:, 1:]], 0.0, atol=1e-13)


@pytest.mark.parametrize("k", [2, 4])
def test_constant_on_even_order_lives_on_vertices(mesh2, neumann2, k):
    space = build_cr_space(mesh2, neumann2, k)
    coeffs = cr_interpolate(space, lambda p: np.ones(len(p)))
    np.testing.assert_allclose(coeffs[: mesh2.n_vertices], 1.0, atol=1e-13)
    np.testing.assert_allclose(coeffs[mesh2.n_vertices :], 0.0, atol=1e-13)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_jump_moments_vanish_for_every_basis_function(mesh2, neumann2, k):
    space = build_cr_space(mesh2, neumann2, k)
    rule = quadrature_edge(2 * k + 2)
    tests = legendre_table(k - 1, rule.points)[0]
    interior = neumann2.interior
    for dof in range(space.n_dofs):
        coeffs = np.zeros(space.n_dofs)
        coeffs[dof] = 1.0
        first, second = facet_traces(space, coeffs, interior, rule)
        moments = (first - second) * rule.weights @ tests.T
        np.testing.assert_allclose(moments, 0.0, atol=1e-12)


@pytest.mark.parametrize("k", [2, 4])
def test_even_order_single_linear_dependence(mesh2, neumann2, k):
    full = build_cr_space(mesh2, neumann2, k, remove_bubble=False)
    reduced = build_cr_space(mesh2, neumann2, k)
    full_mass = assemble_cr_mass(full).toarray()
    reduced_mass = assemble_cr_mass(reduced).toarray()
    assert np.linalg.matrix_rank(full_mass) == full.n_dofs - 1
    assert np.linalg.matrix_rank(reduced_mass) == reduced.n_dofs


@pytest.mark.parametrize("k", [1, 3])
def test_odd_order_mass_full_rank(mesh2, neumann2, k):
    space = build_cr_space(mesh2, neumann2, k)
    assert np.linalg.matrix_rank(assemble_cr_mass(space).toarray()) == space.n_dofs


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_dirichlet_values_match_interpolant(mesh2, mixed2, k):
    value, _ = polynomial(k, seed=10 + k)
    space = build_cr_space(mesh2, mixed2, k, BoundaryData(value))
    assert not space.has_mean_constraint
    assert len(space.dirichlet_dofs) > 0
    assert np.all(np.diff(space.dirichlet_dofs) > 0)
    np.testing.assert_allclose(space.dirichlet_values, cr_interpolate(space, value)[space.dirichlet_dofs], atol=1e-12)
    full = space.full_vector(np.zeros(len(space.free_dofs)))
    np.testing.assert_array_equal(full[space.dirichlet_dofs], space.dirichlet_values)


def test_homogeneous_dirichlet_by_default(mesh2, mixed2):
    space = build_cr_space(mesh2, mixed2, 3)
    np.testing.assert_array_equal(space.dirichlet_values, 0.0)
    expected = np.unique(facet_dof_indices(space, mixed2.dirichlet).ravel())
    np.testing.assert_array_equal(space.dirichlet_dofs, expected)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_flux_projection_reproduces_polynomials(mesh2, k):
    flux = build_flux_space(mesh2, k)
    assert flux.n_dofs == mesh2.n_cells * 2 * k * (k + 1) // 2
    first, _ = polynomial(k - 1, seed=20 + k)
    second, _ = polynomial(k - 1, seed=30 + k)

    def field(points):
        return np.column_stack([first(points), second(points)])

    coeffs = project_l2(flux, field)
    points = random_cell_points(mesh2, seed=k)
    for cell in range(mesh2.n_cells):
        np.testing.assert_allclose(eval_flux(flux, coeffs, cell, points[cell]), field(points[cell]), atol=1e-12)


def test_local_coefficients_shape_check(mesh2, neumann2):
    space = build_cr_space(mesh2, neumann2, 2)
    with pytest.raises(InvalidArgumentError):
        space.local_coefficients(np.zeros(space.n_dofs + 1))


def _smooth_field(seed):
    rng = np.random.default_rng(seed)
    a, b, c, d = rng.uniform(0.5, 1.5, 4)

    def q(points):
        x, y = points[:, 0], points[:, 1]
        return np.exp(0.3 * a * x - 0.2 * b * y) * np.cos(c * x + d * y)

    return q


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_interpolant_moments(mesh4, k):
    topo = build_facets(mesh4, all_neumann)
    space = build_cr_space(mesh4, topo, k)
    q = _smooth_field(50 + k)
    coeffs = cr_interpolate(space, q)
    degree = 2 * k + SMOOTH_QUAD_OFFSET

    # even k trades the top facet moment for the vertex values
    n_facet_moments = k if k % 2 else k - 1
    facets = np.arange(topo.n_facets)
    rule, points, _ = facet_quadrature(mesh4, topo, facets, degree)
    trace, _ = facet_traces(space, coeffs, facets, rule)
    target = q(points.reshape(-1, 2)).reshape(trace.shape)
    tests = legendre_table(k - 1, rule.points)[0][:n_facet_moments]
    facet_moments = ((trace - target) * rule.weights) @ tests.T
    np.testing.assert_allclose(facet_moments, 0.0, atol=1e-11)

    if k >= 3:
        rule, points, weights = cell_quadrature(mesh4, degree)
        values, _ = cell_fields(space, coeffs, rule)
        residual = (values - q(points.reshape(-1, 2)).reshape(values.shape)) * weights
        x, y = points[..., 0], points[..., 1]
        for total in range(k - 2):
            for b in range(total + 1):
                moments = np.sum(residual * x ** (total - b) * y**b, axis=1)
                np.testing.assert_allclose(moments, 0.0, atol=1e-11)


def _sine(points):
    return np.sin(np.pi * points[:, 0])


def _sine_gradient(points):
    return np.column_stack([np.pi * np.cos(np.pi * points[:, 0]), np.zeros(len(points))])


def _sine_product(points):
    return np.sin(np.pi * points[:, 0]) * np.sin(np.pi * points[:, 1])


def _sine_product_gradient(points):
    x, y = np.pi * points[:, 0], np.pi * points[:, 1]
    return np.pi * np.column_stack([np.cos(x) * np.sin(y), np.sin(x) * np.cos(y)])


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
@pytest.mark.parametrize(
    "value, gradient", [(_sine, _sine_gradient), (_sine_product, _sine_product_gradient)]
)
def test_interpolation_error_rates(k, value, gradient):
    value_pairs, gradient_pairs = [], []
    for nx in (8, 16, 32):
        mesh = generate_structured_mesh(nx, nx)
        space = build_cr_space(mesh, build_facets(mesh, all_neumann), k)
        rule = quadrature_triangle(2 * k + 8)
        points = mesh.to_physical(rule.points)
        weights = 2.0 * mesh.areas[:, None] * rule.weights[None, :]
        values, grads = cell_fields(space, cr_interpolate(space, value), rule)
        flat = points.reshape(-1, 2)
        value_error = values - value(flat).reshape(values.shape)
        gradient_error = grads - gradient(flat).reshape(grads.shape)
        value_pairs.append((mesh.h, lp_norm(value_error, weights, 2.0)))
        gradient_pairs.append((mesh.h, lp_norm(gradient_error, weights, 2.0)))
    assert fit_rate(value_pairs) == pytest.approx(k + 1, abs=0.2)
    assert fit_rate(gradient_pairs) == pytest.approx(k, abs=0.2)
