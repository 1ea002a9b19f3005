import numpy as np
import pandas as pd
import pytest

from app.constants import ExitCode, __version__
from app.exceptions import ConfigError
from cases.manufactured import derive_case
from main import main
from study import build_case, mesh_levels, parse_config
from study.convergence import rate_table
from study.runs import omegas, run_grid

SOLVE_INI = """
[model]
case = case2
alpha = 3
beta = 10

[discretization]
k = 1, 2

[mesh]
nx = 2, 4
"""

STUDY_INI = """
[model]
case = case1
alpha = 3.0
beta = 10.0

[discretization]
k = 1

[mesh]
nx = 4, 8  ; two levels

[solver]
scheme = relaxed
omega = 0.5, 1.0
"""

INEQUALITY_INI = """
[model]
case = case1

[discretization]
k = 1, 2

[mesh]
nx = 2, 4

[inequalities]
n_samples = 4
"""

STALLED_INI = """
[model]
case = case1

[discretization]
k = 1

[mesh]
nx = 4

[solver]
n_max = 1
expect_converged = {expect}
"""


def linear_case(alpha, beta):
    return derive_case(
        lambda pts: np.tile([1.0, 0.0], (len(pts), 1)),
        lambda pts: np.zeros(len(pts)),
        lambda pts: pts[:, 1],
        lambda pts: np.tile([0.0, 1.0], (len(pts), 1)),
        alpha,
        beta,
        name="linear",
    )


def fixed_alpha_case(alpha, beta):
    return linear_case(5.0, beta)


def _write(tmp_path, text, name="experiment.ini"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_defaults():
    config = parse_config("[model]\ncase = case1\n[discretization]\nk = 2\n")
    assert config.model.alpha == [3.0]
    assert config.model.beta == [10.0]
    assert config.model.boundary == "pure_neumann"
    assert config.solver.scheme == "standard"
    assert config.solver.tol == 1e-8
    assert config.solver.n_max == 2500
    assert config.inequalities.p == 1.5
    assert mesh_levels(config) == [6, 10, 19, 36]


def test_lists_and_levels():
    config = parse_config(STUDY_INI)
    assert config.solver.omega == [0.5, 1.0]
    assert mesh_levels(config) == [4, 8]
    assert omegas(config) == [0.5, 1.0]
    grid = run_grid(config)
    assert [(spec.omega, spec.nx) for spec in grid] == [(0.5, 4), (0.5, 8), (1.0, 4), (1.0, 8)]


def test_standard_scheme_records_unit_omega():
    config = parse_config(SOLVE_INI)
    assert omegas(config) == [1.0]
    assert len(run_grid(config)) == 4


@pytest.mark.parametrize(
    "text, message",
    [
        ("[model]\ncase = case1\n[discretization]\nk = 1\n[solver]\nomega = 1.5\n", "omega"),
        ("[model]\ncase = case1\nalpha = 2\n[discretization]\nk = 1\n", "alpha"),
        ("[model]\ncase = case1\ncolour = red\n[discretization]\nk = 1\n", "unknown key 'model.colour'"),
        ("[model]\ncase = case1\n[discretization]\n", "missing required key 'discretization.k'"),
        ("[model]\ncase = case1\n[discretization]\nk = 1\n[mesh]\nnx = 4\nh = 0.1\n", "either nx or h"),
        ("[model]\ncase = case3\n[discretization]\nk = 1\n", "case"),
        ("[model]\ncase = custom\n[discretization]\nk = 1\n", "custom_case"),
        ("this is not ini", "malformed"),
    ],
)
def test_invalid_configs(text, message):
    with pytest.raises(ConfigError, match=message):
        parse_config(text)


def test_custom_case():
    config = parse_config(
        "[model]\ncase = custom\ncustom_case = tests.test_study:linear_case\n[discretization]\nk = 1\n"
    )
    case = build_case(config, 3.0, 10.0)
    assert case.name == "linear"

    for entry_point in ("tests.test_study:fixed_alpha_case", "tests.test_study:missing", "no_such_module:case"):
        config = parse_config(f"[model]\ncase = custom\ncustom_case = {entry_point}\n[discretization]\nk = 1\n")
        with pytest.raises(ConfigError):
            build_case(config, 3.0, 10.0)


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_exit_codes_for_bad_input(tmp_path):
    assert main(["solve", "--config", str(tmp_path / "missing.ini")]) == ExitCode.IO
    bad = _write(tmp_path, "[model]\ncase = case1\n[discretization]\nk = 0\n")
    assert main(["solve", "--config", str(bad), "--out", str(tmp_path / "out")]) == ExitCode.CONFIG
    incompatible = _write(
        tmp_path, "[model]\ncase = custom\ncustom_case = tests.test_study:fixed_alpha_case\n[discretization]\nk = 1\n",
        "custom.ini",
    )
    assert main(["solve", "--config", str(incompatible), "--out", str(tmp_path / "out")]) == ExitCode.CONFIG


def test_solve_writes_runs(tmp_path):
    config = _write(tmp_path, SOLVE_INI)
    first, second = tmp_path / "first", tmp_path / "second"
    assert main(["solve", "--config", str(config), "--out", str(first), "--quiet"]) == ExitCode.OK
    assert main(["solve", "--config", str(config), "--out", str(second), "--quiet"]) == ExitCode.OK

    runs = (first / "runs.csv").read_text(encoding="utf-8")
    assert runs.splitlines()[0] == "k,alpha,beta,omega,h,nx,iterations,converged,residual,E_u,E_p"
    assert runs == (second / "runs.csv").read_text(encoding="utf-8")
    assert (first / "report.txt").read_bytes() == (second / "report.txt").read_bytes()

    frame = pd.read_csv(first / "runs.csv")
    assert len(frame) == 4
    assert frame["converged"].all()
    assert (frame["omega"] == 1.0).all()
    assert (frame.loc[frame["k"] == 1, "E_u"] <= 1e-10).all()
    second_order = frame.loc[frame["k"] == 2, "E_u"].to_numpy()
    assert second_order[0] > 1e-8
    assert second_order[1] < second_order[0]


def test_study_writes_errors_and_iterations(tmp_path):
    out = tmp_path / "study"
    assert main(["study", "--config", str(_write(tmp_path, STUDY_INI)), "--out", str(out), "--quiet"]) == ExitCode.OK
    errors = pd.read_csv(out / "errors.csv")
    iterations = pd.read_csv(out / "iterations.csv")
    assert list(errors.columns) == ["k", "alpha", "beta", "omega", "h", "E_u", "E_p", "rate_u", "rate_p"]
    assert list(iterations.columns) == ["k", "alpha", "beta", "omega", "h", "nx", "iterations", "converged"]
    assert len(errors) == len(iterations) == 4
    assert errors["rate_u"].notna().all()
    assert (iterations["iterations"] >= 1).all()
    report = (out / "report.txt").read_text(encoding="utf-8")
    assert "published source component 2" in report


def test_rate_table_marks_groups():
    frame = pd.DataFrame(
        {
            "k": [1, 1, 1],
            "alpha": [3.0] * 3,
            "beta": [10.0] * 3,
            "omega": [1.0] * 3,
            "h": [0.4, 0.2, 0.1],
            "converged": [True] * 3,
            "E_u": [0.4, 0.2, 0.1],
            "E_p": [0.16, 0.04, 0.01],
        }
    )
    rates = rate_table(frame)
    assert rates.loc[0, "rate_u"] == pytest.approx(1.0)
    assert rates.loc[0, "rate_p"] == pytest.approx(2.0)
    assert rates.loc[0, "finest_rate_p"] == pytest.approx(2.0)
    assert not rates.loc[0, "passed"]


def test_inequality_study_rows(tmp_path):
    out = tmp_path / "constants"
    config = _write(tmp_path, INEQUALITY_INI)
    assert main(["inequalities", "--config", str(config), "--out", str(out), "--quiet"]) == ExitCode.OK
    text = (out / "constants.csv").read_text(encoding="utf-8")
    assert text.splitlines()[0] == "h,k,max_ratio_poincare,max_ratio_trace"
    frame = pd.read_csv(out / "constants.csv")
    assert len(frame) == 4
    assert (frame["max_ratio_poincare"] > 0).all()
    assert np.isfinite(frame["max_ratio_trace"]).all()


@pytest.mark.parametrize("expect, code", [("false", ExitCode.OK), ("true", ExitCode.DIVERGENCE)])
def test_unconverged_runs(tmp_path, expect, code):
    config = _write(tmp_path, STALLED_INI.format(expect=expect))
    out = tmp_path / "out"
    assert main(["solve", "--config", str(config), "--out", str(out), "--quiet"]) == code
    frame = pd.read_csv(out / "runs.csv")
    assert not frame["converged"].any()
    assert (frame["iterations"] == 1).all()
