import concurrent.futures
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from app.config import Config
from app.exceptions import InvalidArgumentError
from inequalities.norms import BrokenNormSpec, broken_tilde_norm, lebesgue_degree
from polybasis.integrate import facet_quadrature
from polybasis.quadrature import quadrature_triangle
from spaces.cr import CrSpace
from spaces.evaluate import cell_fields, facet_traces
from spaces.interpolation import cr_interpolate
from utils.logger import get_logger

logger = get_logger(__name__)

DEGENERATE_TOL = 1e-14
N_MODES = 3
NOISE = 1e-2


@dataclass(frozen=True)
class InequalityEstimate:
    max_ratio_poincare: float
    max_ratio_trace: float
    n_samples: int
    skipped: int


def domain_lq_norm(cr: CrSpace, coeffs: np.ndarray, q: float) -> float:
    rule = quadrature_triangle(lebesgue_degree(cr.k, q))
    weights = 2.0 * cr.mesh.areas[:, None] * rule.weights[None, :]
    values, _ = cell_fields(cr, coeffs, rule)
    return float(np.sum(weights * np.abs(values) ** q) ** (1.0 / q))


def boundary_lq_norm(cr: CrSpace, coeffs: np.ndarray, q: float) -> float:
    facets = cr.topo.boundary
    rule, _, weights = facet_quadrature(cr.mesh, cr.topo, facets, lebesgue_degree(cr.k, q))
    trace, _ = facet_traces(cr, coeffs, facets, rule)
    return float(np.sum(weights * np.abs(trace) ** q) ** (1.0 / q))


def sample_function(cr: CrSpace, rng: np.random.Generator) -> np.ndarray:
    """
    Random CR function with zero Dirichlet DoFs and unit coefficient norm:
    the interpolant of a random sine series vanishing on the left and bottom
    sides, plus small coefficient noise.
    """
    box = cr.mesh.domain_box
    amplitudes = rng.standard_normal((N_MODES, N_MODES))
    frequencies = (2.0 * np.arange(1, N_MODES + 1) - 1.0) * np.pi / 2.0

    def field(points):
        xi = (points[:, 0] - box.xmin) / box.width
        eta = (points[:, 1] - box.ymin) / box.height
        sx = np.sin(np.outer(xi, frequencies))
        sy = np.sin(np.outer(eta, frequencies))
        return np.einsum("nm,mk,nk->n", sx, amplitudes, sy)

    coeffs = cr_interpolate(cr, field)
    coeffs += NOISE * np.max(np.abs(coeffs)) * rng.standard_normal(cr.n_dofs)
    coeffs[cr.dirichlet_dofs] = 0.0
    return coeffs / np.linalg.norm(coeffs)


def _evaluate_sample(cr: CrSpace, spec: BrokenNormSpec, seed: int, index: int) -> Dict[str, Any]:
    """Worker executed in threadpool for each sample."""
    rng = np.random.default_rng([seed, index])
    coeffs = sample_function(cr, rng)
    denominator = broken_tilde_norm(cr, coeffs, spec)
    if denominator < DEGENERATE_TOL:
        return {"index": index, "poincare": None, "trace": None}
    return {
        "index": index,
        "poincare": domain_lq_norm(cr, coeffs, spec.p_star) / denominator,
        "trace": boundary_lq_norm(cr, coeffs, spec.p_sharp) / denominator,
    }


def estimate_constant(cr: CrSpace, spec: BrokenNormSpec, n_samples: int, seed: int = 0) -> InequalityEstimate:
    """
    Largest observed ratio of ||v||_{L^p*(Omega)} (Poincare) and ||v||_{L^p#(boundary)}
    (trace) to the averaged-jump broken seminorm, over random samples.
    """
    if len(cr.topo.dirichlet) == 0:
        raise InvalidArgumentError("estimate_constant needs a nonempty Dirichlet boundary")
    if n_samples < 1:
        raise InvalidArgumentError(f"n_samples must be >= 1, got {n_samples}")
    if len(cr.dirichlet_values) and np.any(cr.dirichlet_values != 0.0):
        raise InvalidArgumentError("estimate_constant samples the space with zero Dirichlet data")

    max_workers = min(Config.THREADS, n_samples)
    results = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = {executor.submit(_evaluate_sample, cr, spec, seed, i): i for i in range(n_samples)}
        for fut in concurrent.futures.as_completed(futures):
            results.append(fut.result())

    results.sort(key=lambda r: r["index"])
    kept = [r for r in results if r["poincare"] is not None]
    skipped = n_samples - len(kept)
    if skipped:
        logger.warning(f"Skipped {skipped} of {n_samples} samples with a degenerate seminorm")
    if not kept:
        raise InvalidArgumentError("every sample had a degenerate seminorm")
    estimate = InequalityEstimate(
        max_ratio_poincare=max(r["poincare"] for r in kept),
        max_ratio_trace=max(r["trace"] for r in kept),
        n_samples=n_samples,
        skipped=skipped,
    )
    logger.info(
        f"k={cr.k}, h={cr.mesh.h:.4f}: Poincare ratio {estimate.max_ratio_poincare:.4f}, "
        f"trace ratio {estimate.max_ratio_trace:.4f}"
    )
    return estimate
