from typing import List

import numpy as np

from app.exceptions import InvalidMeshError, MeshIndexError, MeshParseError
from mesh.core import Mesh, make_box, signed_areas
from mesh.topology import check_conformity
from utils.logger import get_logger

logger = get_logger(__name__)


def _tokens(text: str) -> List[List[str]]:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line.split())
    return lines


def _header(line: List[str], keyword: str) -> int:
    if len(line) != 2 or line[0].lower() != keyword:
        raise MeshParseError(f"expected '{keyword} <count>', got {' '.join(line)!r}")
    try:
        count = int(line[1])
    except ValueError:
        raise MeshParseError(f"'{keyword}' count must be an integer, got {line[1]!r}")
    if count < 0:
        raise MeshParseError(f"'{keyword}' count must be >= 0, got {count}")
    return count


def load_mesh(text: str) -> Mesh:
    """
    Parse the plain-text mesh format:

        vertices N
        x y            (N lines)
        cells M
        i j k          (M lines, 0-based)

    Clockwise cells are repaired by swapping two vertices (with a warning).
    """
    lines = _tokens(text)
    if not lines:
        raise MeshParseError("empty mesh file")

    n_vertices = _header(lines[0], "vertices")
    if len(lines) < n_vertices + 2:
        raise MeshParseError(f"expected {n_vertices} vertex lines and a 'cells' header")
    try:
        vertices = np.array([[float(v) for v in line] for line in lines[1 : n_vertices + 1]])
    except ValueError as e:
        raise MeshParseError(f"bad vertex coordinate: {e}") from e
    if vertices.shape != (n_vertices, 2):
        raise MeshParseError("every vertex line must hold exactly two coordinates")

    n_cells = _header(lines[n_vertices + 1], "cells")
    cell_lines = lines[n_vertices + 2 :]
    if len(cell_lines) != n_cells:
        raise MeshParseError(f"expected {n_cells} cell lines, found {len(cell_lines)}")
    try:
        cells = np.array([[int(v) for v in line] for line in cell_lines], dtype=np.int64)
    except ValueError as e:
        raise MeshParseError(f"bad cell index: {e}") from e
    if cells.shape != (n_cells, 3):
        raise MeshParseError("every cell line must hold exactly three vertex indices")

    if cells.size and (cells.min() < 0 or cells.max() >= n_vertices):
        bad = int(cells.max()) if cells.max() >= n_vertices else int(cells.min())
        raise MeshIndexError(f"cell references vertex {bad} of {n_vertices}")

    areas = signed_areas(vertices, cells)
    if np.any(areas == 0.0):
        raise InvalidMeshError(f"cell {int(np.argmin(np.abs(areas)))} is degenerate")
    clockwise = areas < 0
    if np.any(clockwise):
        logger.warning(f"Repairing orientation of {int(clockwise.sum())} clockwise cell(s)")
        cells[clockwise] = cells[clockwise][:, [0, 2, 1]]

    box = make_box(vertices[:, 0].min(), vertices[:, 0].max(), vertices[:, 1].min(), vertices[:, 1].max())
    mesh = Mesh(vertices, cells, box)
    check_conformity(mesh)
    logger.info(f"Loaded mesh: {mesh.n_vertices} vertices, {mesh.n_cells} cells")
    return mesh
