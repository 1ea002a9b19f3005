import argparse
import logging
import pathlib
import sys
from typing import Callable, Dict, Optional, Sequence

from app.constants import ExitCode, __version__
from app.exceptions import CaseConstructionError, ConfigError, DivergenceError
from app.schema import ExperimentConfig
from study import load_config, run_convergence_study, run_inequality_study, run_solve
from study.convergence import StudyOutcome
from utils.logger import get_logger, set_level

logger = get_logger(__name__)

COMMANDS: Dict[str, Callable[[ExperimentConfig, pathlib.Path], StudyOutcome]] = {
    "solve": run_solve,
    "study": run_convergence_study,
    "inequalities": run_inequality_study,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cr-forchheimer",
        description="Crouzeix-Raviart mixed discretization of generalized Darcy-Forchheimer flow",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    helps = {
        "solve": "solve every configured grid point, write runs.csv",
        "study": "convergence and iteration study, write errors.csv and iterations.csv",
        "inequalities": "sample broken Poincare and trace constants, write constants.csv",
    }
    for name, text in helps.items():
        sub = subparsers.add_parser(name, help=text)
        sub.add_argument("--config", required=True, type=pathlib.Path, help="INI experiment file")
        sub.add_argument("--out", type=pathlib.Path, default=None, help="output directory (overrides [output])")
        sub.add_argument("--quiet", action="store_true", help="only log warnings and errors")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.quiet:
        set_level(logging.WARNING)

    try:
        config = load_config(args.config)
    except ConfigError as e:
        logger.error(f"Config error in {args.config}: {e}")
        return ExitCode.CONFIG
    except OSError as e:
        logger.error(f"Cannot read {args.config}: {e}")
        return ExitCode.IO

    out_dir = args.out or pathlib.Path(config.output.output_dir)
    logger.info(f"Running '{args.command}' with {args.config}, output in {out_dir}")
    try:
        outcome = COMMANDS[args.command](config, out_dir)
    except (ConfigError, CaseConstructionError) as e:
        logger.error(f"Config error: {e}")
        return ExitCode.CONFIG
    except DivergenceError as e:
        logger.error(f"Solver diverged at iteration {e.iteration}: {e}")
        return ExitCode.DIVERGENCE
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return ExitCode.IO

    if not outcome.success:
        logger.error("Some runs failed or did not converge; see report.txt")
        return ExitCode.DIVERGENCE
    return ExitCode.OK


if __name__ == "__main__":
    sys.exit(main())
