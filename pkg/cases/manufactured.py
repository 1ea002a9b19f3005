import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from app.constants import BoundaryKind
from app.exceptions import CaseConstructionError, InvalidArgumentError
from mesh.core import Box
from mesh.structured import DEFAULT_BOX
from utils.logger import get_logger

logger = get_logger(__name__)

Field = Callable[[np.ndarray], np.ndarray]

RESIDUAL_TOL = 1e-10
FD_STEP = 1e-3
CHECK_POINTS = 100


@dataclass(frozen=True, eq=False)
class ManufacturedCase:
    """
    Exact flux/potential pair with the data of the strong problem.

    Every callback takes points of shape (n, 2); g_N additionally takes the
    outward unit normals (n, 2).
    """

    name: str
    u_exact: Field
    p_exact: Field
    grad_p_exact: Field
    div_u: Field
    f: Field
    b: Field
    g_N: Callable[[np.ndarray, np.ndarray], np.ndarray]
    g_D: Optional[Field]
    alpha: float
    beta: float
    mu: float = 1.0
    rho: float = 1.0
    kinv: np.ndarray = field(default_factory=lambda: np.eye(2))
    box: Box = DEFAULT_BOX
    notes: Tuple[str, ...] = ()

    @property
    def mu_over_rho(self) -> float:
        return self.mu / self.rho

    @property
    def beta_over_rho(self) -> float:
        return self.beta / self.rho

    def drag(self, points: np.ndarray) -> np.ndarray:
        """(mu/rho) K^-1 u + (beta/rho) |u|^(alpha - 2) u."""
        u = np.asarray(self.u_exact(points), dtype=float)
        magnitude = np.linalg.norm(u, axis=1)
        return self.mu_over_rho * u @ np.asarray(self.kinv).T + self.beta_over_rho * (
            magnitude ** (self.alpha - 2.0)
        )[:, None] * u


def _validate_parameters(alpha: float, beta: float, mu: float, rho: float) -> None:
    if alpha <= 2:
        raise InvalidArgumentError(f"alpha must be > 2, got {alpha}")
    if beta < 0:
        raise InvalidArgumentError(f"beta must be >= 0, got {beta}")
    if mu <= 0 or rho <= 0:
        raise InvalidArgumentError(f"mu and rho must be > 0, got mu={mu}, rho={rho}")


def interior_points(box: Box, n: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    margin = 4 * FD_STEP
    x = rng.uniform(box.xmin + margin, box.xmax - margin, n)
    y = rng.uniform(box.ymin + margin, box.ymax - margin, n)
    return np.column_stack([x, y])


def _central_derivative(fn: Field, points: np.ndarray, axis: int) -> np.ndarray:
    """Fourth-order central difference of fn along one coordinate."""
    step = np.zeros(2)
    step[axis] = FD_STEP

    def at(shift):
        return np.asarray(fn(points + shift * step), dtype=float)

    return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * FD_STEP)


def _check(identity: str, residual: np.ndarray, scale: float) -> None:
    worst = float(np.max(np.abs(residual))) if residual.size else 0.0
    if worst > RESIDUAL_TOL * max(1.0, scale):
        raise CaseConstructionError(identity, worst)


def _box_integrals(case: ManufacturedCase, n: int = 24) -> Tuple[float, float]:
    """Tensor Gauss integrals of b over the box and of g_N over its boundary."""
    t, w = leggauss(n)
    box = case.box
    xs = box.xmin + 0.5 * (t + 1.0) * box.width
    ys = box.ymin + 0.5 * (t + 1.0) * box.height
    wx = 0.5 * box.width * w
    wy = 0.5 * box.height * w
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    volume = np.asarray(case.b(np.column_stack([gx.ravel(), gy.ravel()])), dtype=float)
    integral_b = float(volume @ np.outer(wx, wy).ravel())

    sides = [
        (np.column_stack([xs, np.full(n, box.ymin)]), (0.0, -1.0), wx),
        (np.column_stack([xs, np.full(n, box.ymax)]), (0.0, 1.0), wx),
        (np.column_stack([np.full(n, box.xmin), ys]), (-1.0, 0.0), wy),
        (np.column_stack([np.full(n, box.xmax), ys]), (1.0, 0.0), wy),
    ]
    integral_g = 0.0
    for points, normal, weights in sides:
        normals = np.tile(normal, (n, 1))
        integral_g += float(np.asarray(case.g_N(points, normals), dtype=float) @ weights)
    return integral_b, integral_g


def check_case(case: ManufacturedCase, boundary: str = BoundaryKind.PURE_NEUMANN) -> ManufacturedCase:
    """
    Raise CaseConstructionError unless the case data satisfy the strong problem.

    int b = int g_N is only required on pure Neumann boundaries.
    """
    points = interior_points(case.box, CHECK_POINTS)
    f = np.asarray(case.f(points), dtype=float)
    grad_p = np.asarray(case.grad_p_exact(points), dtype=float)
    scale = float(np.max(np.abs(f)))
    _check("f = grad p + (mu/rho) K^-1 u + (beta/rho) |u|^(alpha-2) u", f - grad_p - case.drag(points), scale)

    fd_grad = np.column_stack([_central_derivative(case.p_exact, points, axis) for axis in (0, 1)])
    _check("grad_p_exact = grad p_exact", grad_p - fd_grad, float(np.max(np.abs(grad_p))))

    def component(axis):
        return lambda pts: np.asarray(case.u_exact(pts), dtype=float)[:, axis]

    fd_div = _central_derivative(component(0), points, 0) + _central_derivative(component(1), points, 1)
    b = np.asarray(case.b(points), dtype=float)
    _check("b = div u", b - fd_div, float(np.max(np.abs(b))))
    _check("div_u = div u", np.asarray(case.div_u(points), dtype=float) - fd_div, float(np.max(np.abs(b))))

    if boundary == BoundaryKind.PURE_NEUMANN:
        integral_b, integral_g = _box_integrals(case)
        _check("int b = int g_N", np.array([integral_b - integral_g]), abs(integral_b))
    return case


def flux_normal(u: Field) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    def g_N(points: np.ndarray, normals: np.ndarray) -> np.ndarray:
        return np.einsum("nd,nd->n", np.asarray(u(points), dtype=float), normals)

    return g_N


def derive_case(
    u: Field,
    div_u: Field,
    p: Field,
    grad_p: Field,
    alpha: float,
    beta: float,
    mu: float = 1.0,
    rho: float = 1.0,
    kinv=None,
    box: Box = DEFAULT_BOX,
    name: str = "custom",
    notes: Tuple[str, ...] = (),
) -> ManufacturedCase:
    """Build (f, b, g_N, g_D) from an exact pair through the strong form, then self-check."""
    _validate_parameters(alpha, beta, mu, rho)
    kinv = np.eye(2) if kinv is None else np.asarray(kinv, dtype=float)
    partial = ManufacturedCase(
        name=name,
        u_exact=u,
        p_exact=p,
        grad_p_exact=grad_p,
        div_u=div_u,
        f=lambda x: x,
        b=div_u,
        g_N=flux_normal(u),
        g_D=p,
        alpha=alpha,
        beta=beta,
        mu=mu,
        rho=rho,
        kinv=kinv,
        box=box,
        notes=tuple(notes),
    )

    def f(points: np.ndarray) -> np.ndarray:
        return np.asarray(grad_p(points), dtype=float) + partial.drag(points)

    case = dataclasses.replace(partial, f=f)
    return check_case(case)
