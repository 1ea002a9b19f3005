import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.constants import MAX_QUADRATURE_DEGREE
from app.exceptions import InvalidArgumentError
from measures.norms import broken_gradient_norm
from polybasis.integrate import facet_quadrature
from spaces.cr import CrSpace
from spaces.evaluate import facet_traces

DIMENSION = 2


@dataclass(frozen=True)
class BrokenNormSpec:
    """
    Exponents of the broken seminorm ||grad_h v||_p + (sum_F h_F^e ||jump||^p_{L^q(F)})^(1/p)
    over interior and Dirichlet facets. q defaults to p_sharp.
    """

    p: float
    q: Optional[float] = None

    def __post_init__(self):
        if not 1.0 <= self.p < DIMENSION:
            raise InvalidArgumentError(f"p must lie in [1, {DIMENSION}), got {self.p}")
        if self.q is not None and not 1.0 <= self.q <= self.p_star:
            raise InvalidArgumentError(f"q must lie in [1, {self.p_star}], got {self.q}")

    @property
    def p_sharp(self) -> float:
        return self.p * (DIMENSION - 1) / (DIMENSION - self.p)

    @property
    def p_star(self) -> float:
        return DIMENSION * self.p / (DIMENSION - self.p)

    @property
    def facet_q(self) -> float:
        return self.p_sharp if self.q is None else self.q

    @property
    def facet_exponent(self) -> float:
        # -p/q' - d p/p' + d p/q', with 1/r' = 1 - 1/r
        p, q, d = self.p, self.facet_q, DIMENSION
        return -p * (1.0 - 1.0 / q) - d * p * (1.0 - 1.0 / p) + d * p * (1.0 - 1.0 / q)


def lebesgue_degree(k: int, q: float) -> int:
    """Quadrature degree for |v|^q with v of degree k."""
    return min(int(math.ceil(q * k)) + 2, MAX_QUADRATURE_DEGREE)


def _jump_facets(cr: CrSpace) -> np.ndarray:
    return np.concatenate([cr.topo.interior, cr.topo.dirichlet])


def facet_jump_term(cr: CrSpace, coeffs: np.ndarray, spec: BrokenNormSpec, averaged: bool = True) -> float:
    """(sum_F h_F^e ||J_F||^p_{L^q(F)})^(1/p), J_F the jump or its facet mean."""
    facets = _jump_facets(cr)
    if len(facets) == 0:
        return 0.0
    q = spec.facet_q
    rule, _, weights = facet_quadrature(cr.mesh, cr.topo, facets, lebesgue_degree(cr.k, q))
    first, second = facet_traces(cr, coeffs, facets, rule)
    jump = first - second
    lengths = cr.topo.lengths[facets]
    if averaged:
        mean = np.sum(jump * weights, axis=1) / lengths
        facet_norms = np.abs(mean) * lengths ** (1.0 / q)
    else:
        facet_norms = np.sum(weights * np.abs(jump) ** q, axis=1) ** (1.0 / q)
    return float(np.sum(lengths**spec.facet_exponent * facet_norms**spec.p) ** (1.0 / spec.p))


def broken_norm(cr: CrSpace, coeffs: np.ndarray, spec: BrokenNormSpec, averaged: bool = True) -> float:
    gradient = broken_gradient_norm(cr, coeffs, spec.p, lebesgue_degree(cr.k, spec.p))
    return gradient + facet_jump_term(cr, coeffs, spec, averaged)


def broken_tilde_norm(cr: CrSpace, coeffs: np.ndarray, spec: BrokenNormSpec) -> float:
    """Broken seminorm with facet jumps replaced by their means."""
    return broken_norm(cr, coeffs, spec, averaged=True)
