from typing import Optional

from scipy.sparse import csr_matrix

from app.schema import SolverConfig
from solver.linear import solve_linear_saddle
from solver.problem import DarcyForchheimerProblem
from solver.state import IterationState


def fixed_point_step(
    state: IterationState, problem: DarcyForchheimerProblem, N: Optional[csr_matrix] = None
) -> IterationState:
    """
    One lagged-weight step: N from the previous flux, then solve the linear saddle system.

    N may be passed in when the caller already assembled it at state.u.
    """
    N = problem.nonlinear_block(state.u) if N is None else N
    solution = solve_linear_saddle(problem.system.with_nonlinear(N))
    return IterationState(solution.u, solution.p, solution.multiplier, state.iteration + 1)


class StandardFixedPoint:
    def __init__(self, config: SolverConfig):
        self.config = config

    def step(
        self, state: IterationState, problem: DarcyForchheimerProblem, N: Optional[csr_matrix] = None
    ) -> IterationState:
        return fixed_point_step(state, problem, N)
