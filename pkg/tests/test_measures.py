import numpy as np
import pytest

from app.exceptions import InvalidArgumentError
from assembly.blocks import weight_degree
from cases.benchmarks import case1
from mesh.structured import generate_structured_mesh
from mesh.topology import all_neumann, build_facets
from measures import (
    ErrorReport,
    broken_gradient_norm,
    conjugate_exponent,
    error_flux_l2,
    error_potential_grad,
    error_report,
    field_lp_norm,
    fit_rate,
    pairwise_rates,
)
from spaces.cr import build_cr_space
from spaces.flux import build_flux_space, project_l2
from spaces.interpolation import cr_interpolate
from tests.conftest import polynomial


def _spaces(nx, k):
    mesh = generate_structured_mesh(nx, nx)
    return build_flux_space(mesh, k), build_cr_space(mesh, build_facets(mesh, all_neumann), k)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_polynomial_flux_has_no_projection_error(k):
    flux, _ = _spaces(2, k)
    _, gradient = polynomial(k, seed=k)
    error = error_flux_l2(flux, gradient, project_l2(flux, gradient))
    assert error.relative
    assert float(error) <= 1e-12


def test_zero_discrete_flux_has_unit_error():
    flux, _ = _spaces(2, 2)
    case = case1(3.0, 10.0)
    assert float(error_flux_l2(flux, case.u_exact, np.zeros(flux.n_dofs))) == pytest.approx(1.0, rel=1e-12)


def test_zero_exact_field_reports_absolute_error():
    flux, _ = _spaces(2, 1)
    error = error_flux_l2(flux, lambda pts: np.zeros((len(pts), 2)), np.ones(flux.n_dofs))
    assert not error.relative
    assert float(error) > 0.0


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_interpolated_polynomial_has_no_potential_error(k):
    _, cr = _spaces(2, k)
    value, gradient = polynomial(k, seed=10 + k)
    assert float(error_potential_grad(cr, gradient, cr_interpolate(cr, value), 3.0)) <= 1e-11


def test_potential_error_needs_alpha_above_two():
    _, cr = _spaces(2, 1)
    with pytest.raises(InvalidArgumentError):
        error_potential_grad(cr, lambda pts: np.zeros((len(pts), 2)), np.zeros(cr.n_dofs), 2.0)
    assert conjugate_exponent(3.0) == pytest.approx(1.5)
    with pytest.raises(InvalidArgumentError):
        conjugate_exponent(1.0)


def test_broken_gradient_norm_of_linear_field():
    _, cr = _spaces(2, 1)
    coeffs = cr_interpolate(cr, lambda pts: pts[:, 0])
    # |grad x| = 1 on a domain of area 4
    assert broken_gradient_norm(cr, coeffs, 1.5) == pytest.approx(4.0 ** (2.0 / 3.0), rel=1e-12)
    assert broken_gradient_norm(cr, 2.0 * coeffs, 1.5) == pytest.approx(2.0 * 4.0 ** (2.0 / 3.0), rel=1e-12)


def test_field_lp_norm():
    mesh = generate_structured_mesh(2, 2)
    assert field_lp_norm(mesh, lambda pts: np.ones(len(pts)), 3.0, 4) == pytest.approx(4.0 ** (1.0 / 3.0))
    with pytest.raises(InvalidArgumentError):
        field_lp_norm(mesh, lambda pts: np.ones(len(pts)), 0.5, 4)


def test_flux_error_is_stable_in_the_quadrature_degree():
    flux, _ = _spaces(16, 2)
    case = case1(3.0, 10.0)
    u_h = project_l2(flux, case.u_exact)
    default = float(error_flux_l2(flux, case.u_exact, u_h))
    finer = float(error_flux_l2(flux, case.u_exact, u_h, degree=weight_degree(2) + 4))
    assert finer == pytest.approx(default, rel=1e-6)


@pytest.mark.parametrize("k", [1, 2])
def test_best_approximation_rates(k):
    case = case1(3.0, 10.0)
    flux_pairs, potential_pairs = [], []
    for nx in (4, 8, 16):
        flux, cr = _spaces(nx, k)
        report = error_report(
            flux,
            cr,
            case.u_exact,
            case.grad_p_exact,
            project_l2(flux, case.u_exact),
            cr_interpolate(cr, case.p_exact),
            case.alpha,
        )
        flux_pairs.append((report.h, report.E_u))
        potential_pairs.append((report.h, report.E_p))
    assert fit_rate(flux_pairs) == pytest.approx(k, abs=0.25)
    assert fit_rate(potential_pairs) == pytest.approx(k, abs=0.25)


def test_fit_rate_examples():
    h = np.array([0.5, 0.25, 0.125, 0.0625])
    assert fit_rate(list(zip(h, 3.0 * h**2))) == pytest.approx(2.0, abs=1e-12)
    assert fit_rate(list(zip(h, np.full(4, 0.1)))) == pytest.approx(0.0, abs=1e-12)
    noise = 1.0 + 0.01 * np.random.default_rng(5).uniform(-1.0, 1.0, 4)
    assert fit_rate(list(zip(h, h**3 * noise))) == pytest.approx(3.0, abs=0.05)


def test_pairwise_rates():
    pairs = [(0.5, 0.25), (0.25, 0.0625), (0.125, 0.03125)]
    np.testing.assert_allclose(pairwise_rates(pairs), [2.0, 1.0])


@pytest.mark.parametrize(
    "pairs",
    [
        [(0.5, 0.1)],
        [(0.25, 0.1), (0.5, 0.05)],
        [(0.5, 0.1), (0.5, 0.05)],
        [(0.5, 0.1), (0.25, 0.0)],
        [(0.0, 0.1), (-0.5, 0.05)],
    ],
)
def test_fit_rate_rejects_bad_input(pairs):
    with pytest.raises(InvalidArgumentError):
        fit_rate(pairs)


def test_error_report_rejects_negative_errors():
    with pytest.raises(InvalidArgumentError):
        ErrorReport(h=0.5, E_u=-1.0, E_p=0.0)
