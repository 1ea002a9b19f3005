from dataclasses import dataclass
from enum import Enum

__version__ = "0.3.0"


@dataclass
class Scheme:
    STANDARD = "standard"
    RELAXED = "relaxed"


@dataclass
class BoundaryKind:
    PURE_NEUMANN = "pure_neumann"
    MIXED = "mixed"


@dataclass
class CaseName:
    CASE1 = "case1"
    CASE2 = "case2"
    CUSTOM = "custom"


class FacetTag(int, Enum):
    INTERIOR = 0
    DIRICHLET = 1
    NEUMANN = 2


class BasisKind(Enum):
    LAGRANGE_VERTEX = "lagrange_vertex"
    LAGRANGE_FACET_MODAL = "lagrange_facet_modal"
    LAGRANGE_BULK_MODAL = "lagrange_bulk_modal"
    FACET_BUBBLE = "facet_bubble"
    BULK_BUBBLE = "bulk_bubble"
    FLUX_MODAL = "flux_modal"


@dataclass
class SolverDefaults:
    TOL = 1e-8
    N_MAX = 2500
    ALPHA = 3.0
    BETA = 10.0
    OMEGA = 0.5
    MU = 1.0
    RHO = 1.0


@dataclass
class ExitCode:
    OK = 0
    CONFIG = 2
    DIVERGENCE = 3
    IO = 4


# quadrature degree offsets on top of 2k
POLY_QUAD_OFFSET = 2
# non-polynomial integrands: |u|^(alpha-2) weights, error norms, interpolation
SMOOTH_QUAD_OFFSET = 6
MAX_QUADRATURE_DEGREE = 60
MAX_ORDER = 8

BARYCENTRIC_TOL = 1e-12
COMPATIBILITY_TOL = 1e-10
