from typing import Optional

from scipy.sparse import csr_matrix

from app.exceptions import InvalidArgumentError
from app.schema import SolverConfig
from solver.linear import solve_linear_saddle
from solver.problem import DarcyForchheimerProblem
from solver.state import IterationState


def relaxed_step(
    state: IterationState,
    problem: DarcyForchheimerProblem,
    omega: float,
    N: Optional[csr_matrix] = None,
) -> IterationState:
    """
    Mann step: solve with the weight of the blended flux, then blend
    u_tilde = omega * u + (1 - omega) * u_tilde_prev; the potential is not blended.
    """
    if not 0.0 < omega <= 1.0:
        raise InvalidArgumentError(f"omega must lie in (0, 1], got {omega}")
    N = problem.nonlinear_block(state.u) if N is None else N
    solution = solve_linear_saddle(problem.system.with_nonlinear(N))
    blended = omega * solution.u + (1.0 - omega) * state.u
    return IterationState(blended, solution.p, solution.multiplier, state.iteration + 1)


class RelaxedFixedPoint:
    def __init__(self, config: SolverConfig):
        self.config = config

    def step(
        self, state: IterationState, problem: DarcyForchheimerProblem, N: Optional[csr_matrix] = None
    ) -> IterationState:
        return relaxed_step(state, problem, self.config.omega, N)
