from spaces.cr import BoundaryData, CrSpace, build_cr_space
from spaces.dirichlet import apply_dirichlet
from spaces.evaluate import cell_fields, eval_cr, eval_cr_grad, facet_traces, tabulate_cells
from spaces.flux import FluxSpace, build_flux_space, eval_flux, project_l2
from spaces.interpolation import cr_interpolate

__all__ = [
    "BoundaryData",
    "CrSpace",
    "FluxSpace",
    "apply_dirichlet",
    "build_cr_space",
    "build_flux_space",
    "cell_fields",
    "cr_interpolate",
    "eval_cr",
    "eval_cr_grad",
    "eval_flux",
    "facet_traces",
    "project_l2",
    "tabulate_cells",
]
