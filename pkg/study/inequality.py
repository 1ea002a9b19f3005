import pathlib

import pandas as pd

from app.schema import ExperimentConfig
from inequalities.norms import BrokenNormSpec
from inequalities.sampling import estimate_constant
from mesh.structured import generate_structured_mesh
from mesh.topology import build_facets, mixed_rule
from spaces.cr import build_cr_space
from study.config import config_box, mesh_levels
from study.convergence import StudyOutcome
from study.report import format_frame, write_csv, write_report
from utils.logger import get_logger

logger = get_logger(__name__)

CONSTANTS_COLUMNS = ["h", "k", "max_ratio_poincare", "max_ratio_trace"]


def run_inequality_study(config: ExperimentConfig, out_dir: pathlib.Path) -> StudyOutcome:
    """
    Sampled Poincare and trace constants per (level, k) with zero Dirichlet data
    on the left and bottom sides; writes constants.csv and report.txt.
    """
    out_dir = pathlib.Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = BrokenNormSpec(config.inequalities.p)
    box = config_box(config)

    rows, skipped = [], []
    for nx in mesh_levels(config):
        mesh = generate_structured_mesh(nx, nx, box)
        topo = build_facets(mesh, mixed_rule(box))
        for k in config.discretization.k:
            estimate = estimate_constant(
                build_cr_space(mesh, topo, k), spec, config.inequalities.n_samples, config.output.seed
            )
            rows.append(
                {
                    "h": mesh.h,
                    "k": k,
                    "max_ratio_poincare": estimate.max_ratio_poincare,
                    "max_ratio_trace": estimate.max_ratio_trace,
                }
            )
            if estimate.skipped:
                skipped.append(f"h={mesh.h:.4f}, k={k}: {estimate.skipped} samples skipped")

    frame = pd.DataFrame(rows, columns=CONSTANTS_COLUMNS)
    spread = {
        column: frame[column].max() / frame[column].min() if len(frame) else float("nan")
        for column in CONSTANTS_COLUMNS[2:]
    }
    summary = "\n".join(
        [
            f"p = {spec.p}, p* = {spec.p_star}, p# = {spec.p_sharp}, facet exponent = {spec.facet_exponent}",
            f"samples per row = {config.inequalities.n_samples}, seed = {config.output.seed}",
            *(f"{column}: max/min over rows = {value:.4f}" for column, value in spread.items()),
        ]
    )
    files = [
        write_csv(frame, out_dir / "constants.csv"),
        write_report(
            out_dir / "report.txt",
            "Broken Poincare and trace constants",
            [("Parameters", summary), ("Constants", format_frame(frame)), ("Skipped samples", "\n".join(skipped))],
        ),
    ]
    logger.info(f"Wrote {', '.join(str(f) for f in files)}")
    return StudyOutcome(files, True)
