from dataclasses import dataclass
from typing import Optional

from cases.manufactured import ManufacturedCase
from mesh.core import Mesh
from mesh.topology import FacetTopology, all_neumann, build_facets
from polybasis.integrate import integrate_cells, integrate_facets

QUADRATURE_DEGREE = 16


@dataclass(frozen=True)
class CompatibilityReport:
    integral_b: float
    integral_g_N: float

    @property
    def difference(self) -> float:
        return self.integral_b - self.integral_g_N

    @property
    def passed(self) -> bool:
        return abs(self.difference) <= 1e-9 * (1.0 + abs(self.integral_b))


def validate_compatibility(
    case: ManufacturedCase, mesh: Mesh, topo: Optional[FacetTopology] = None
) -> CompatibilityReport:
    """Compare int_Omega b with int_Gamma g_N on the mesh; reports only."""
    topo = topo or build_facets(mesh, all_neumann)
    return CompatibilityReport(
        integrate_cells(mesh, case.b, QUADRATURE_DEGREE),
        integrate_facets(mesh, topo, case.g_N, QUADRATURE_DEGREE, topo.boundary),
    )
