"""The two manufactured problems on (-1, 1)^2 used by the convergence and iteration studies."""

import dataclasses
from typing import List

import numpy as np

from cases.manufactured import ManufacturedCase, derive_case, interior_points
from utils.logger import get_logger

logger = get_logger(__name__)

PI = np.pi


def _sin_cos_flux(points):
    x, y = points[:, 0], points[:, 1]
    return np.column_stack([np.sin(PI * x), np.cos(PI * y)])


def _sin_cos_div(points):
    x, y = points[:, 0], points[:, 1]
    return PI * np.cos(PI * x) - PI * np.sin(PI * y)


def _sin_cos_potential(points):
    x, y = points[:, 0], points[:, 1]
    return np.cos(0.5 * PI * x) * np.sin(0.5 * PI * y)


def _sin_cos_potential_grad(points):
    x, y = points[:, 0], points[:, 1]
    return np.column_stack(
        [
            -0.5 * PI * np.sin(0.5 * PI * x) * np.sin(0.5 * PI * y),
            0.5 * PI * np.cos(0.5 * PI * x) * np.cos(0.5 * PI * y),
        ]
    )


def _published_case1_source(points, alpha, beta):
    x, y = points[:, 0], points[:, 1]
    weight = beta * (np.sin(PI * x) ** 2 + np.cos(PI * y) ** 2) ** ((alpha - 2.0) / 2.0)
    return np.column_stack(
        [
            np.sin(PI * x) - 0.5 * PI * np.sin(0.5 * PI * x) * np.sin(0.5 * PI * y) + weight * np.sin(PI * x),
            np.cos(PI * y) - 0.5 * PI * np.cos(0.5 * PI * x) * np.cos(0.5 * PI * y) + weight * np.cos(PI * y),
        ]
    )


def _published_case1_divergence(points):
    x, y = points[:, 0], points[:, 1]
    return -2.0 * PI * np.sin(PI * x) * np.sin(PI * y)


def _deviations(case: ManufacturedCase, published_f, published_b, published_sides) -> List[str]:
    """Compare published data with the data derived from (u, p)."""
    notes = []
    points = interior_points(case.box, 100, seed=1)
    df = np.abs(published_f(points) - case.f(points)).max(axis=0)
    for component, gap in enumerate(df):
        if gap > 1e-10:
            notes.append(f"published source component {component + 1} differs from grad p + drag (max |diff| {gap:.3e})")
    db = float(np.abs(published_b(points) - case.b(points)).max())
    if db > 1e-10:
        notes.append(f"published divergence differs from div u (max |diff| {db:.3e})")

    t = np.linspace(-0.9, 0.9, 7)
    box = case.box
    for side, points, normal in [
        ("left", np.column_stack([np.full_like(t, box.xmin), t]), (-1.0, 0.0)),
        ("right", np.column_stack([np.full_like(t, box.xmax), t]), (1.0, 0.0)),
        ("bottom", np.column_stack([t, np.full_like(t, box.ymin)]), (0.0, -1.0)),
        ("top", np.column_stack([t, np.full_like(t, box.ymax)]), (0.0, 1.0)),
    ]:
        derived = case.g_N(points, np.tile(normal, (len(t), 1)))
        gap = float(np.abs(derived - published_sides[side]).max())
        if gap > 1e-10:
            notes.append(f"published Neumann value on the {side} side differs from u.n (max |diff| {gap:.3e})")
    for note in notes:
        logger.warning(f"{case.name}: {note}; using data derived from the exact solution")
    return notes


def case1(alpha: float, beta: float, mu: float = 1.0, rho: float = 1.0) -> ManufacturedCase:
    """u = (sin(pi x), cos(pi y)), p = cos(pi x / 2) sin(pi y / 2)."""
    case = derive_case(
        _sin_cos_flux,
        _sin_cos_div,
        _sin_cos_potential,
        _sin_cos_potential_grad,
        alpha,
        beta,
        mu,
        rho,
        name="case1",
    )
    notes = _deviations(
        case,
        lambda pts: _published_case1_source(pts, alpha, beta),
        _published_case1_divergence,
        {"left": 0.0, "right": 0.0, "bottom": 1.0, "top": -1.0},
    )
    return dataclasses.replace(case, notes=tuple(notes))


def _constant_flux(points):
    return np.tile([1.0, -1.0], (len(points), 1))


def _cubic_potential(points):
    return points[:, 0] ** 3 + points[:, 1] ** 3


def _cubic_potential_grad(points):
    return 3.0 * points**2


def case2(alpha: float, beta: float, mu: float = 1.0, rho: float = 1.0) -> ManufacturedCase:
    """u = (1, -1), p = x^3 + y^3; |u|^(alpha - 2) = 2^((alpha - 2) / 2)."""
    case = derive_case(
        _constant_flux,
        lambda pts: np.zeros(len(pts)),
        _cubic_potential,
        _cubic_potential_grad,
        alpha,
        beta,
        mu,
        rho,
        name="case2",
    )
    drag = 2.0 ** ((alpha - 2.0) / 2.0) * beta

    def published_f(points):
        x, y = points[:, 0], points[:, 1]
        return np.column_stack([1.0 + drag + 3.0 * x**2, -1.0 - drag + 3.0 * y**2])

    notes = _deviations(
        case,
        published_f,
        lambda pts: np.zeros(len(pts)),
        {"left": -1.0, "right": 1.0, "bottom": 1.0, "top": -1.0},
    )
    return dataclasses.replace(case, notes=tuple(notes))
