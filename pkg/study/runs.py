import concurrent.futures
import itertools
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from app.config import Config
from app.constants import Scheme
from app.exceptions import DivergenceError
from app.schema import ExperimentConfig
from cases.manufactured import ManufacturedCase
from measures.norms import error_flux_l2, error_potential_grad
from mesh.structured import generate_structured_mesh
from solver.problem import build_problem
from solver.runner import run
from study.config import build_case, config_box, mesh_levels
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class RunSpec:
    k: int
    alpha: float
    beta: float
    omega: float
    nx: int

    @property
    def group(self):
        return (self.k, self.alpha, self.beta, self.omega)


def omegas(config: ExperimentConfig) -> List[float]:
    # the standard scheme is the relaxed one with omega = 1
    return list(config.solver.omega) if config.solver.scheme == Scheme.RELAXED else [1.0]


def run_grid(config: ExperimentConfig) -> List[RunSpec]:
    """(k x alpha x beta x omega) x levels, in output order."""
    return [
        RunSpec(k, alpha, beta, omega, nx)
        for k, alpha, beta, omega in itertools.product(
            config.discretization.k, config.model.alpha, config.model.beta, omegas(config)
        )
        for nx in mesh_levels(config)
    ]


def _empty_record(spec: RunSpec, h: float) -> Dict[str, Any]:
    return {
        "k": spec.k,
        "alpha": spec.alpha,
        "beta": spec.beta,
        "omega": spec.omega,
        "h": h,
        "nx": spec.nx,
        "iterations": 0,
        "converged": False,
        "residual": np.nan,
        "E_u": np.nan,
        "E_p": np.nan,
        "notes": (),
        "diverged": False,
        "error": None,
    }


def _run_one(config: ExperimentConfig, spec: RunSpec, case: ManufacturedCase) -> Dict[str, Any]:
    """
    Worker executed in threadpool for each grid point.
    Returns a record with iterations, errors and an optional error string.
    """
    mesh = generate_structured_mesh(spec.nx, spec.nx, config_box(config))
    record = _empty_record(spec, mesh.h)
    try:
        logger.info(
            f"Worker starting k={spec.k}, alpha={spec.alpha}, beta={spec.beta}, omega={spec.omega}, nx={spec.nx}"
        )
        record["notes"] = case.notes
        problem = build_problem(case, mesh, spec.k, config.model.boundary)
        result = run(problem, config.solver_config(spec.alpha, spec.beta, spec.omega))
        record.update(
            iterations=result.iterations,
            converged=result.converged,
            residual=result.final_residual,
            E_u=float(error_flux_l2(problem.flux, case.u_exact, result.u_coeffs)),
            E_p=float(error_potential_grad(problem.cr, case.grad_p_exact, result.p_coeffs, spec.alpha)),
        )
    except DivergenceError as exc:
        logger.error(f"Run k={spec.k}, alpha={spec.alpha}, nx={spec.nx} diverged: {exc}")
        record.update(iterations=exc.iteration, diverged=True, error=str(exc))
    except Exception as exc:
        logger.exception(f"Error in run k={spec.k}, alpha={spec.alpha}, nx={spec.nx}: {exc}")
        record["error"] = str(exc)
    return record


def execute_runs(config: ExperimentConfig) -> List[Dict[str, Any]]:
    """Run the whole grid in a thread pool; records come back in grid order."""
    specs = run_grid(config)
    # one case per (alpha, beta), built before any solve
    cases = {
        (alpha, beta): build_case(config, alpha, beta)
        for alpha, beta in itertools.product(config.model.alpha, config.model.beta)
    }
    max_workers = min(Config.THREADS, len(specs))
    logger.info(f"Running {len(specs)} solves on {max_workers} workers")

    records = {}
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = {
            executor.submit(_run_one, config, spec, cases[(spec.alpha, spec.beta)]): i
            for i, spec in enumerate(specs)
        }
        for fut in concurrent.futures.as_completed(futures):
            records[futures[fut]] = fut.result()

    ordered = [records[i] for i in range(len(specs))]
    failed = [r for r in ordered if not r["converged"]]
    logger.info(f"All runs finished. Converged: {len(ordered) - len(failed)}. Not converged: {len(failed)}")
    return ordered


def runs_succeeded(config: ExperimentConfig, records: List[Dict[str, Any]]) -> bool:
    """True iff every run converged, or non-convergence was expected and every failure is a divergence."""
    if config.solver.expect_converged:
        return all(r["converged"] for r in records)
    return all(r["error"] is None or r["diverged"] for r in records)
