import pathlib
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from app.exceptions import InvalidArgumentError
from app.schema import ExperimentConfig
from measures.rates import fit_rate, pairwise_rates
from study.report import case_notes, failures, format_frame, write_csv, write_report
from study.runs import execute_runs, runs_succeeded
from utils.logger import get_logger

logger = get_logger(__name__)

GROUP = ["k", "alpha", "beta", "omega"]
RUNS_COLUMNS = GROUP + ["h", "nx", "iterations", "converged", "residual", "E_u", "E_p"]
ERRORS_COLUMNS = GROUP + ["h", "E_u", "E_p", "rate_u", "rate_p"]
ITERATIONS_COLUMNS = GROUP + ["h", "nx", "iterations", "converged"]
RATE_TOL = 0.25


@dataclass(frozen=True)
class StudyOutcome:
    files: List[pathlib.Path]
    success: bool


def _rates(group: pd.DataFrame, column: str):
    """(global fit, finest-pair rate) over converged levels; NaN when not computable."""
    usable = group[group["converged"] & np.isfinite(group[column])].sort_values("h", ascending=False)
    pairs = list(zip(usable["h"], usable[column]))
    try:
        return fit_rate(pairs), pairwise_rates(pairs)[-1]
    except InvalidArgumentError:
        return np.nan, np.nan


def rate_table(frame: pd.DataFrame) -> pd.DataFrame:
    rows = []
    for key, group in frame.groupby(GROUP, sort=False):
        rate_u, finest_u = _rates(group, "E_u")
        rate_p, finest_p = _rates(group, "E_p")
        expected = float(key[0])
        rows.append(
            dict(
                zip(GROUP, key),
                rate_u=rate_u,
                finest_rate_u=finest_u,
                rate_p=rate_p,
                finest_rate_p=finest_p,
                expected=expected,
                passed=bool(abs(rate_u - expected) <= RATE_TOL and abs(rate_p - expected) <= RATE_TOL),
            )
        )
    return pd.DataFrame(rows)


def _frame(records: List[Dict[str, Any]]) -> pd.DataFrame:
    return pd.DataFrame.from_records(records, columns=RUNS_COLUMNS)


def _prepare(out_dir: pathlib.Path) -> pathlib.Path:
    out_dir = pathlib.Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def run_solve(config: ExperimentConfig, out_dir: pathlib.Path) -> StudyOutcome:
    """Solve every grid point; writes runs.csv and report.txt."""
    out_dir = _prepare(out_dir)
    records = execute_runs(config)
    frame = _frame(records)
    files = [
        write_csv(frame, out_dir / "runs.csv"),
        write_report(
            out_dir / "report.txt",
            f"Solve: {config.model.case}, {config.solver.scheme} scheme",
            [
                ("Runs", format_frame(frame)),
                ("Failures", "\n".join(failures(records))),
                ("Manufactured data notes", "\n".join(case_notes(records))),
            ],
        ),
    ]
    logger.info(f"Wrote {', '.join(str(f) for f in files)}")
    return StudyOutcome(files, runs_succeeded(config, records))


def run_convergence_study(config: ExperimentConfig, out_dir: pathlib.Path) -> StudyOutcome:
    """
    h-convergence and iteration tables over the configured grid; writes
    errors.csv, iterations.csv and report.txt. Rate columns hold the global
    least-squares slope of each (k, alpha, beta, omega) group.
    """
    out_dir = _prepare(out_dir)
    records = execute_runs(config)
    frame = _frame(records)
    rates = rate_table(frame)

    errors = frame.merge(rates[GROUP + ["rate_u", "rate_p"]], on=GROUP, how="left")[ERRORS_COLUMNS]
    iterations = frame[ITERATIONS_COLUMNS]
    files = [
        write_csv(errors, out_dir / "errors.csv"),
        write_csv(iterations, out_dir / "iterations.csv"),
    ]
    files.append(
        write_report(
            out_dir / "report.txt",
            f"Convergence study: {config.model.case}, {config.solver.scheme} scheme",
            [
                ("Errors", format_frame(frame[GROUP + ["h", "E_u", "E_p"]])),
                (f"Rates (pass: |rate - k| <= {RATE_TOL})", format_frame(rates)),
                ("Iterations", format_frame(iterations)),
                ("Failures", "\n".join(failures(records))),
                ("Manufactured data notes", "\n".join(case_notes(records))),
            ],
        )
    )
    logger.info(f"Wrote {', '.join(str(f) for f in files)}")
    return StudyOutcome(files, runs_succeeded(config, records))
