import math
from typing import List, Sequence

import numpy as np

from app.exceptions import InvalidArgumentError
from mesh.core import Box, Mesh, make_box
from utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_BOX = Box(-1.0, 1.0, -1.0, 1.0)


def generate_structured_mesh(nx: int, ny: int, box: Box = DEFAULT_BOX) -> Mesh:
    """
    nx * ny rectangles, each split along its SW-NE diagonal into two CCW triangles.
    """
    if int(nx) != nx or int(ny) != ny or nx < 1 or ny < 1:
        raise InvalidArgumentError(f"subdivision counts must be positive integers, got nx={nx}, ny={ny}")
    nx, ny = int(nx), int(ny)
    box = make_box(*box)

    xs = np.linspace(box.xmin, box.xmax, nx + 1)
    ys = np.linspace(box.ymin, box.ymax, ny + 1)
    gx, gy = np.meshgrid(xs, ys)
    vertices = np.column_stack([gx.ravel(), gy.ravel()])

    i, j = np.meshgrid(np.arange(nx), np.arange(ny))
    v00 = (j * (nx + 1) + i).ravel()
    v10 = v00 + 1
    v01 = v00 + nx + 1
    v11 = v01 + 1
    lower = np.column_stack([v00, v10, v11])
    upper = np.column_stack([v00, v11, v01])
    cells = np.stack([lower, upper], axis=1).reshape(-1, 3)

    logger.debug(f"Structured mesh {nx}x{ny} on {tuple(box)}: {len(cells)} cells")
    return Mesh(vertices, cells, box)


def nx_for_target_h(h_target: float, box: Box = DEFAULT_BOX) -> int:
    """Smallest nx whose square-cell diagonal sqrt(2)*width/nx does not exceed h_target."""
    if h_target <= 0:
        raise InvalidArgumentError(f"target h must be > 0, got {h_target}")
    return int(math.ceil(math.sqrt(2.0) * box.width / h_target - 1e-12))


def refine_sequence(nx: int, ny: int, levels: int, box: Box = DEFAULT_BOX) -> List[Mesh]:
    """Structured meshes with nx, ny doubled per level."""
    if levels < 1:
        raise InvalidArgumentError(f"levels must be >= 1, got {levels}")
    return [generate_structured_mesh(nx * 2**level, ny * 2**level, box) for level in range(levels)]


def meshes_for(nx_values: Sequence[int], box: Box = DEFAULT_BOX) -> List[Mesh]:
    return [generate_structured_mesh(nx, nx, box) for nx in nx_values]
