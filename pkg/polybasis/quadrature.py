from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from app.constants import MAX_QUADRATURE_DEGREE
from app.exceptions import CapabilityError, InvalidArgumentError


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """
    points: barycentric (n, 3) on the reference triangle, or parameters t (n,) on [-1, 1].
    Triangle weights sum to 1/2, edge weights to 2.
    """

    points: np.ndarray
    weights: np.ndarray
    exact_degree: int

    @property
    def n_points(self) -> int:
        return len(self.weights)


def _check_degree(degree: int) -> int:
    if int(degree) != degree or degree < 0:
        raise InvalidArgumentError(f"quadrature degree must be a non-negative integer, got {degree}")
    if degree > MAX_QUADRATURE_DEGREE:
        raise CapabilityError(
            f"quadrature degree {degree} not supported (max {MAX_QUADRATURE_DEGREE})"
        )
    return int(degree)


def _frozen(rule: QuadratureRule) -> QuadratureRule:
    rule.points.setflags(write=False)
    rule.weights.setflags(write=False)
    return rule


@lru_cache(maxsize=None)
def quadrature_edge(degree: int) -> QuadratureRule:
    """Gauss-Legendre rule on [-1, 1] exact to `degree`."""
    degree = _check_degree(degree)
    t, w = leggauss(degree // 2 + 1)
    return _frozen(QuadratureRule(t, w, degree))


@lru_cache(maxsize=None)
def quadrature_triangle(degree: int) -> QuadratureRule:
    """
    Collapsed tensor Gauss rule on {x, y >= 0, x + y <= 1}.

    (xi, eta) in [0, 1]^2 maps to (x, y) = (xi (1 - eta), eta) with Jacobian 1 - eta,
    so eta needs one extra degree of exactness.
    """
    degree = _check_degree(degree)
    t_xi, w_xi = leggauss(degree // 2 + 1)
    t_eta, w_eta = leggauss((degree + 1) // 2 + 1)
    xi = 0.5 * (t_xi + 1.0)
    eta = 0.5 * (t_eta + 1.0)

    x = np.outer(1.0 - eta, xi).ravel()
    y = np.repeat(eta, len(xi))
    w = (np.outer(0.25 * w_eta * (1.0 - eta), w_xi)).ravel()
    points = np.column_stack([1.0 - x - y, x, y])
    return _frozen(QuadratureRule(points, w, degree))
