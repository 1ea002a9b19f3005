import time
from typing import Optional, Tuple

import numpy as np

from app.exceptions import DivergenceError, InvalidArgumentError
from app.schema import SolverConfig
from assembly.system import SaddleSystem
from solver import SchemePlugin
from solver.linear import solve_linear_saddle
from solver.problem import DarcyForchheimerProblem
from solver.state import IterationState, SolverResult
from utils.logger import get_logger

logger = get_logger(__name__)


def residual_norm(system: SaddleSystem, s: np.ndarray, r: np.ndarray) -> float:
    """Euclidean norm of A s - r, A carrying whatever N the system holds."""
    if s.shape != (system.size,) or r.shape != (system.size,):
        raise InvalidArgumentError(f"expected vectors of length {system.size}, got {s.shape} and {r.shape}")
    return float(np.linalg.norm(system.apply(s) - r))


def darcy_init(problem: DarcyForchheimerProblem) -> Tuple[np.ndarray, np.ndarray]:
    """Linear Darcy solve (no nonlinear block); returns (u0, full CR p0)."""
    solution = solve_linear_saddle(problem.system)
    return solution.u, problem.cr.full_vector(solution.p)


def _check_parameters(problem: DarcyForchheimerProblem, config: SolverConfig) -> None:
    case = problem.case
    mismatched = [
        name
        for name, expected, given in [
            ("alpha", case.alpha, config.alpha),
            ("beta", case.beta, config.beta),
            ("mu", case.mu, config.mu),
            ("rho", case.rho, config.rho),
        ]
        if expected != given
    ]
    if mismatched:
        raise InvalidArgumentError(f"solver config disagrees with the problem on {', '.join(mismatched)}")


def run(
    problem: DarcyForchheimerProblem, config: SolverConfig, initial_u: Optional[np.ndarray] = None
) -> SolverResult:
    """
    Iterate from the Darcy solution (or `initial_u`) until the residual of the
    system with N at the current iterate drops to config.tol, or n_max steps.
    """
    _check_parameters(problem, config)
    scheme = SchemePlugin().get_scheme(config)
    system = problem.system
    start = time.perf_counter()
    logger.info(
        f"Solving k={problem.k}, h={problem.mesh.h:.4f} with {config.scheme} scheme "
        f"(alpha={config.alpha}, beta={config.beta}, omega={config.omega})"
    )

    if initial_u is None:
        solution = solve_linear_saddle(system)
        state = IterationState(solution.u, solution.p, solution.multiplier, 0)
    else:
        initial_u = np.asarray(initial_u, dtype=float)
        if initial_u.shape != (system.n_u,):
            raise InvalidArgumentError(f"initial flux must have {system.n_u} entries, got {initial_u.shape}")
        state = IterationState(initial_u, np.zeros(system.n_p), 0.0, 0)

    rhs = system.rhs()
    N = problem.nonlinear_block(state.u)
    history = []
    converged = False
    while state.iteration < config.n_max:
        state = scheme.step(state, problem, N)
        N = problem.nonlinear_block(state.u)
        if not np.all(np.isfinite(N.data)):
            raise DivergenceError(f"non-finite nonlinear weight at iteration {state.iteration}", state.iteration)
        residual = residual_norm(
            system.with_nonlinear(N), system.stack(state.u, state.p, state.multiplier), rhs
        )
        if not np.isfinite(residual):
            raise DivergenceError(f"non-finite residual at iteration {state.iteration}", state.iteration)
        history.append(residual)
        logger.debug(f"iteration {state.iteration}: residual {residual:.6e}")
        if residual <= config.tol:
            converged = True
            break

    wall_time = time.perf_counter() - start
    if converged:
        logger.info(f"Converged in {state.iteration} iterations (residual {history[-1]:.3e}, {wall_time:.2f}s)")
    else:
        logger.warning(f"No convergence after {state.iteration} iterations (residual {history[-1]:.3e})")
    return SolverResult(
        u_coeffs=state.u,
        p_coeffs=problem.cr.full_vector(state.p),
        iterations=state.iteration,
        converged=converged,
        residual_history=tuple(history),
        wall_time=wall_time,
    )
