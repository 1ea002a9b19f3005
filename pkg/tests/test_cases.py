import dataclasses

import numpy as np
import pytest

from app.constants import BoundaryKind
from app.exceptions import CaseConstructionError, InvalidArgumentError
from cases.benchmarks import case1, case2
from cases.compatibility import validate_compatibility
from cases.manufactured import check_case, derive_case
from mesh.structured import generate_structured_mesh

ORIGIN = np.zeros((1, 2))


def test_case1_values():
    case = case1(3.0, 10.0)
    np.testing.assert_allclose(case.u_exact(ORIGIN), [[0.0, 1.0]], atol=1e-15)
    np.testing.assert_allclose(case.p_exact(ORIGIN), [0.0], atol=1e-15)
    bottom = np.array([[0.3, -1.0]])
    np.testing.assert_allclose(case.g_N(bottom, np.array([[0.0, -1.0]])), [1.0], atol=1e-14)
    top = np.array([[0.3, 1.0]])
    np.testing.assert_allclose(case.g_N(top, np.array([[0.0, 1.0]])), [-1.0], atol=1e-14)


def test_case1_records_published_deviations():
    notes = case1(3.0, 10.0).notes
    assert any("component 2" in note for note in notes)
    assert any("divergence" in note for note in notes)
    assert not any("component 1" in note for note in notes)
    assert not any("Neumann" in note for note in notes)


def test_case2_values():
    case = case2(3.0, 10.0)
    expected = 1.0 + 10.0 * np.sqrt(2.0)
    np.testing.assert_allclose(case.f(ORIGIN), [[expected, -expected]], rtol=1e-14)
    np.testing.assert_allclose(case.b(np.array([[0.2, 0.7]])), [0.0])
    assert case.notes == ()


def test_case_parameters_flow_into_the_source():
    heavy = case2(3.0, 10.0, mu=2.0, rho=4.0)
    assert heavy.mu_over_rho == pytest.approx(0.5)
    expected = 0.5 + 2.5 * np.sqrt(2.0)
    np.testing.assert_allclose(heavy.f(ORIGIN), [[expected, -expected]], rtol=1e-14)


def test_darcy_limit():
    case = case1(3.0, 0.0)
    points = np.array([[0.1, 0.2], [-0.4, 0.9]])
    np.testing.assert_allclose(case.f(points), case.grad_p_exact(points) + case.u_exact(points), atol=1e-14)


def test_derive_case_matches_the_strong_form():
    case = derive_case(
        lambda pts: np.column_stack([pts[:, 1], pts[:, 0] ** 2]),
        lambda pts: np.zeros(len(pts)),
        lambda pts: pts[:, 0] * pts[:, 1],
        lambda pts: np.column_stack([pts[:, 1], pts[:, 0]]),
        4.0,
        2.0,
    )
    points = np.array([[0.5, -0.5]])
    u = np.array([-0.5, 0.25])
    expected = np.array([-0.5, 0.5]) + u + 2.0 * (u @ u) * u
    np.testing.assert_allclose(case.f(points), [expected], rtol=1e-14)
    np.testing.assert_allclose(case.g_N(np.array([[1.0, 0.0]]), np.array([[1.0, 0.0]])), [0.0])


def test_wrong_divergence_is_rejected():
    with pytest.raises(CaseConstructionError):
        derive_case(
            lambda pts: np.column_stack([pts[:, 0], pts[:, 1]]),
            lambda pts: np.ones(len(pts)),
            lambda pts: np.zeros(len(pts)),
            lambda pts: np.zeros((len(pts), 2)),
            3.0,
            1.0,
        )


def test_wrong_gradient_is_rejected():
    case = case2(3.0, 1.0)
    with pytest.raises(CaseConstructionError):
        check_case(dataclasses.replace(case, grad_p_exact=lambda pts: 2.0 * pts**2))


@pytest.mark.parametrize("alpha, beta", [(2.0, 1.0), (1.5, 1.0), (3.0, -1.0)])
def test_invalid_parameters(alpha, beta):
    with pytest.raises(InvalidArgumentError):
        case1(alpha, beta)


def test_compatibility_of_the_benchmarks():
    mesh = generate_structured_mesh(4, 4)
    for case in (case1(3.0, 10.0), case2(3.0, 10.0)):
        report = validate_compatibility(case, mesh)
        assert report.passed
        assert abs(report.difference) <= 1e-10


def test_incompatible_data_is_reported():
    case = dataclasses.replace(
        case2(3.0, 10.0),
        b=lambda pts: np.ones(len(pts)),
        g_N=lambda pts, normals: np.zeros(len(pts)),
    )
    report = validate_compatibility(case, generate_structured_mesh(2, 2))
    assert report.difference == pytest.approx(4.0, rel=1e-12)
    assert not report.passed


def test_neumann_balance_only_checked_on_pure_neumann_boundaries():
    case = case2(3.0, 10.0)
    shifted = dataclasses.replace(case, g_N=lambda pts, normals: case.g_N(pts, normals) + 1.0)
    with pytest.raises(CaseConstructionError) as info:
        check_case(shifted)
    assert "int b = int g_N" in str(info.value)
    assert check_case(shifted, BoundaryKind.MIXED) is shifted
