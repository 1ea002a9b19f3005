import configparser
import importlib
import pathlib
from typing import List

from pydantic import ValidationError

from app.constants import CaseName
from app.exceptions import ConfigError
from app.schema import ExperimentConfig
from cases.benchmarks import case1, case2
from cases.manufactured import ManufacturedCase
from mesh.core import Box, make_box
from mesh.structured import nx_for_target_h
from utils.logger import get_logger

logger = get_logger(__name__)


def _format_validation_error(exc: ValidationError) -> str:
    problems = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error["loc"])
        if error["type"] == "extra_forbidden":
            problems.append(f"unknown key '{location}'")
        elif error["type"] == "missing":
            problems.append(f"missing required key '{location}'")
        else:
            problems.append(f"{location}: {error['msg']}")
    return "; ".join(problems)


def parse_config(text: str) -> ExperimentConfig:
    """INI text with [model], [discretization], [solver], [mesh], [output], [inequalities]."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigError(f"malformed config: {e}") from e

    raw = {section: dict(parser.items(section)) for section in parser.sections()}
    try:
        config = ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        message = _format_validation_error(e)
        logger.error(f"Invalid config: {message}")
        raise ConfigError(message) from e
    logger.debug(f"Parsed config: {config.model_dump()}")
    return config


def load_config(path: pathlib.Path) -> ExperimentConfig:
    return parse_config(pathlib.Path(path).read_text(encoding="utf-8"))


def config_box(config: ExperimentConfig) -> Box:
    return make_box(*config.mesh.box)


def mesh_levels(config: ExperimentConfig) -> List[int]:
    """nx per level, coarsest first."""
    if config.mesh.nx is not None:
        return sorted(set(config.mesh.nx))
    box = config_box(config)
    return sorted({nx_for_target_h(h, box) for h in config.mesh.h})


def _custom_case(entry_point: str):
    module_name, _, function_name = entry_point.partition(":")
    try:
        module = importlib.import_module(module_name)
        return getattr(module, function_name)
    except (ImportError, AttributeError) as e:
        raise ConfigError(f"cannot load custom case '{entry_point}': {e}") from e


def build_case(config: ExperimentConfig, alpha: float, beta: float) -> ManufacturedCase:
    model = config.model
    if model.case == CaseName.CASE1:
        return case1(alpha, beta, model.mu, model.rho)
    if model.case == CaseName.CASE2:
        return case2(alpha, beta, model.mu, model.rho)

    case = _custom_case(model.custom_case)(alpha, beta)
    if not isinstance(case, ManufacturedCase):
        raise ConfigError(f"custom case '{model.custom_case}' returned {type(case).__name__}")
    if (case.alpha, case.beta, case.mu, case.rho) != (alpha, beta, model.mu, model.rho):
        raise ConfigError(f"custom case '{model.custom_case}' ignores the configured model parameters")
    return case
