import logging

import pytest
from pydantic import ValidationError

from app.config import Config, _int_env
from app.exceptions import (
    CaseConstructionError,
    ConfigError,
    CrForchheimerError,
    DivergenceError,
    InvalidArgumentError,
    MeshIndexError,
    RankError,
)
from app.schema import SolverConfig
from utils.logger import get_logger, set_level


def test_config_defaults():
    assert Config.THREADS >= 1
    assert Config.LOG_LEVEL
    assert Config.OUTPUT_DIR


def test_int_env(monkeypatch):
    monkeypatch.delenv("CR_TEST_THREADS", raising=False)
    assert _int_env("CR_TEST_THREADS", 3) == 3
    monkeypatch.setenv("CR_TEST_THREADS", "5")
    assert _int_env("CR_TEST_THREADS", 3) == 5
    for bad in ("many", "0"):
        monkeypatch.setenv("CR_TEST_THREADS", bad)
        with pytest.raises(ValueError):
            _int_env("CR_TEST_THREADS", 3)


def test_logger_is_configured_once():
    first = get_logger("cr_forchheimer.tests")
    second = get_logger("cr_forchheimer.tests")
    assert first is second
    assert len(first.handlers) == 1
    assert not first.propagate


def test_set_level_reaches_every_project_logger():
    logger = get_logger("cr_forchheimer.tests.level")
    try:
        set_level(logging.WARNING)
        assert logger.level == logging.WARNING
    finally:
        set_level(Config.LOG_LEVEL.upper())


def test_exception_hierarchy():
    assert issubclass(InvalidArgumentError, ValueError)
    assert issubclass(MeshIndexError, IndexError)
    assert issubclass(ConfigError, CrForchheimerError)
    error = DivergenceError("boom", 7)
    assert isinstance(error, RuntimeError)
    assert error.iteration == 7
    assert RankError("singular", 2).deficiency == 2
    case_error = CaseConstructionError("b = div u", 0.5)
    assert case_error.identity == "b = div u"
    assert "5.000e-01" in str(case_error)


def test_solver_config_validation():
    config = SolverConfig()
    assert config.scheme == "standard"
    assert config.tol == 1e-8
    assert config.n_max == 2500
    for bad in ({"alpha": 2.0}, {"beta": -1.0}, {"omega": 1.2}, {"n_max": 0}, {"scheme": "newton"}):
        with pytest.raises(ValidationError):
            SolverConfig(**bad)
    with pytest.raises(ValidationError):
        config.tol = 1.0
