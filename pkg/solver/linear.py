from typing import NamedTuple, Optional

import numpy as np
from scipy.sparse.linalg import splu

from app.exceptions import RankError
from assembly.system import SaddleSystem
from utils.logger import get_logger

logger = get_logger(__name__)

RELATIVE_RESIDUAL_TOL = 1e-11
DENSE_RANK_LIMIT = 3000


class SaddleSolution(NamedTuple):
    u: np.ndarray
    p: np.ndarray  # free CR DoFs
    multiplier: float
    stacked: np.ndarray


def _rank_deficiency(matrix) -> Optional[int]:
    if matrix.shape[0] > DENSE_RANK_LIMIT:
        return None
    return int(matrix.shape[0] - np.linalg.matrix_rank(matrix.toarray()))


def solve_linear_saddle(system: SaddleSystem) -> SaddleSolution:
    """Sparse LU solve of the bordered saddle system with its current N block."""
    matrix = system.matrix().tocsc()
    rhs = system.rhs()
    try:
        factor = splu(matrix)
    except RuntimeError as e:
        deficiency = _rank_deficiency(matrix)
        detail = f"rank deficiency {deficiency}" if deficiency is not None else "rank deficient"
        logger.error(f"Saddle factorization failed ({matrix.shape[0]} unknowns, {detail})", exc_info=True)
        raise RankError(f"singular saddle system of size {matrix.shape[0]}: {detail}", deficiency) from e

    stacked = factor.solve(rhs)
    scale = np.linalg.norm(rhs)
    if scale > 0:
        relative = np.linalg.norm(matrix @ stacked - rhs) / scale
        if relative > RELATIVE_RESIDUAL_TOL:
            logger.warning(f"Linear solve relative residual {relative:.3e} above {RELATIVE_RESIDUAL_TOL:.0e}")
    u, p, multiplier = system.split(stacked)
    return SaddleSolution(u, p, multiplier, stacked)
