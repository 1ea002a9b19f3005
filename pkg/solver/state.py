from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class IterationState:
    """
    Current iterate. For the relaxed scheme `u` is the blended flux, which is
    also the one weighting the next nonlinear block.
    """

    u: np.ndarray
    p: np.ndarray  # free CR DoFs
    multiplier: float
    iteration: int


@dataclass(frozen=True, eq=False)
class SolverResult:
    u_coeffs: np.ndarray
    p_coeffs: np.ndarray  # full CR vector, Dirichlet values included
    iterations: int
    converged: bool
    residual_history: Tuple[float, ...]
    wall_time: float

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1] if self.residual_history else float("nan")
