from mesh.core import Box, Mesh, make_box, shape_regularity
from mesh.io import load_mesh
from mesh.structured import (
    DEFAULT_BOX,
    generate_structured_mesh,
    meshes_for,
    nx_for_target_h,
    refine_sequence,
)
from mesh.topology import (
    FacetTopology,
    all_dirichlet,
    all_neumann,
    build_facets,
    check_conformity,
    mixed_rule,
    sides_rule,
)

__all__ = [
    "Box",
    "DEFAULT_BOX",
    "FacetTopology",
    "Mesh",
    "all_dirichlet",
    "all_neumann",
    "build_facets",
    "check_conformity",
    "generate_structured_mesh",
    "load_mesh",
    "make_box",
    "meshes_for",
    "mixed_rule",
    "nx_for_target_h",
    "refine_sequence",
    "shape_regularity",
    "sides_rule",
]
