from study.config import build_case, load_config, mesh_levels, parse_config
from study.convergence import StudyOutcome, run_convergence_study, run_solve
from study.inequality import run_inequality_study

__all__ = [
    "StudyOutcome",
    "build_case",
    "load_config",
    "mesh_levels",
    "parse_config",
    "run_convergence_study",
    "run_inequality_study",
    "run_solve",
]
