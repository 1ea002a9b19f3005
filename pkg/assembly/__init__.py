from assembly.blocks import (
    assemble_broken_stiffness,
    assemble_coupling,
    assemble_cr_mass,
    assemble_flux_mass,
    assemble_mean_constraint,
    assemble_nonlinear_mass,
    assemble_weighted_mass,
    min_eigenvalue,
)
from assembly.inf_sup import inf_sup_constant
from assembly.rhs import assemble_rhs
from assembly.system import SaddleSystem, assemble_saddle_system, discrete_operator

__all__ = [
    "SaddleSystem",
    "assemble_broken_stiffness",
    "assemble_coupling",
    "assemble_cr_mass",
    "assemble_flux_mass",
    "assemble_mean_constraint",
    "assemble_nonlinear_mass",
    "assemble_rhs",
    "assemble_saddle_system",
    "assemble_weighted_mass",
    "discrete_operator",
    "inf_sup_constant",
    "min_eigenvalue",
]
