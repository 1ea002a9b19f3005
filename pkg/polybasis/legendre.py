from typing import Tuple

import numpy as np

from app.exceptions import InvalidArgumentError


def legendre_table(n: int, x) -> Tuple[np.ndarray, np.ndarray]:
    """
    Values and derivatives of S_0..S_n at x, each of shape (n + 1, *x.shape).

    Three-term recurrence
        (j + 1) S_{j+1} = (2j + 1) x S_j - j S_{j-1}
    and S'_{j+1} = S'_{j-1} + (2j + 1) S_j.
    """
    if n < 0:
        raise InvalidArgumentError(f"Legendre degree must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    values = np.empty((n + 1,) + x.shape)
    derivs = np.empty_like(values)
    values[0] = 1.0
    derivs[0] = 0.0
    if n >= 1:
        values[1] = x
        derivs[1] = 1.0
    for j in range(1, n):
        values[j + 1] = ((2 * j + 1) * x * values[j] - j * values[j - 1]) / (j + 1)
        derivs[j + 1] = derivs[j - 1] + (2 * j + 1) * values[j]
    return values, derivs


def legendre_eval(k: int, x):
    """S_k(x); a float for scalar input, an array otherwise."""
    values, _ = legendre_table(k, x)
    out = values[k]
    return float(out) if out.ndim == 0 else out


def legendre_deriv(k: int, x):
    _, derivs = legendre_table(k, x)
    out = derivs[k]
    return float(out) if out.ndim == 0 else out
