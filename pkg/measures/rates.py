from typing import List, Sequence, Tuple

import numpy as np
from scipy.stats import linregress

from app.exceptions import InvalidArgumentError

Pair = Tuple[float, float]


def _validated(pairs: Sequence[Pair]) -> Tuple[np.ndarray, np.ndarray]:
    if len(pairs) < 2:
        raise InvalidArgumentError(f"rate fitting needs at least 2 levels, got {len(pairs)}")
    h = np.array([pair[0] for pair in pairs], dtype=float)
    errors = np.array([pair[1] for pair in pairs], dtype=float)
    if np.any(np.diff(h) >= 0):
        raise InvalidArgumentError(f"mesh sizes must be strictly decreasing, got {h.tolist()}")
    if np.any(h <= 0):
        raise InvalidArgumentError(f"mesh sizes must be > 0, got {h.tolist()}")
    if np.any(errors <= 0):
        raise InvalidArgumentError(f"errors must be > 0 for a log-log fit, got {errors.tolist()}")
    return np.log(h), np.log(errors)


def fit_rate(pairs: Sequence[Pair]) -> float:
    """Least-squares slope of log E against log h."""
    log_h, log_e = _validated(pairs)
    return float(linregress(log_h, log_e).slope)


def pairwise_rates(pairs: Sequence[Pair]) -> List[float]:
    """Slopes between consecutive levels; the last entry is the finest-pair rate."""
    log_h, log_e = _validated(pairs)
    return (np.diff(log_e) / np.diff(log_h)).tolist()
