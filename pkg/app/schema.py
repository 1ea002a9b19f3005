from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config import Config
from app.constants import MAX_ORDER, BoundaryKind, CaseName, Scheme, SolverDefaults


def _split_list(value):
    """INI lists arrive as 'a, b, c'; scalars become one-element lists."""
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    if isinstance(value, (int, float)):
        return [value]
    return value


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    scheme: Literal["standard", "relaxed"] = Field(Scheme.STANDARD)
    omega: float = Field(SolverDefaults.OMEGA, gt=0.0, le=1.0)
    tol: float = Field(SolverDefaults.TOL, gt=0.0)
    n_max: int = Field(SolverDefaults.N_MAX, ge=1)
    alpha: float = Field(SolverDefaults.ALPHA, gt=2.0)
    beta: float = Field(SolverDefaults.BETA, ge=0.0)
    mu: float = Field(SolverDefaults.MU, gt=0.0)
    rho: float = Field(SolverDefaults.RHO, gt=0.0)


class ModelSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    case: Literal["case1", "case2", "custom"]
    custom_case: Optional[str] = None
    alpha: List[float] = Field(default_factory=lambda: [SolverDefaults.ALPHA])
    beta: List[float] = Field(default_factory=lambda: [SolverDefaults.BETA])
    mu: float = Field(SolverDefaults.MU, gt=0.0)
    rho: float = Field(SolverDefaults.RHO, gt=0.0)
    boundary: Literal["pure_neumann", "mixed"] = Field(BoundaryKind.PURE_NEUMANN)

    @field_validator("alpha", "beta", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)

    @field_validator("alpha")
    @classmethod
    def check_alpha(cls, values):
        for value in values:
            if value <= 2.0:
                raise ValueError(f"alpha must be > 2, got {value}")
        return values

    @field_validator("beta")
    @classmethod
    def check_beta(cls, values):
        for value in values:
            if value < 0.0:
                raise ValueError(f"beta must be >= 0, got {value}")
        return values

    @model_validator(mode="after")
    def check_custom_entry_point(self):
        if self.case == CaseName.CUSTOM:
            if not self.custom_case or ":" not in self.custom_case:
                raise ValueError("case = custom needs custom_case = <module>:<function>")
        elif self.custom_case:
            raise ValueError("custom_case is only allowed with case = custom")
        return self


class DiscretizationSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    k: List[int]

    @field_validator("k", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)

    @field_validator("k")
    @classmethod
    def check_orders(cls, values):
        if not values:
            raise ValueError("k needs at least one order")
        for value in values:
            if not 1 <= value <= MAX_ORDER:
                raise ValueError(f"k must lie in [1, {MAX_ORDER}], got {value}")
        return values


class SolverSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scheme: Literal["standard", "relaxed"] = Field(Scheme.STANDARD)
    omega: List[float] = Field(default_factory=lambda: [SolverDefaults.OMEGA])
    tol: float = Field(SolverDefaults.TOL, gt=0.0)
    n_max: int = Field(SolverDefaults.N_MAX, ge=1)
    expect_converged: bool = True

    @field_validator("omega", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)

    @field_validator("omega")
    @classmethod
    def check_omega(cls, values):
        for value in values:
            if not 0.0 < value <= 1.0:
                raise ValueError(f"omega must lie in (0, 1], got {value}")
        return values


class MeshSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    nx: Optional[List[int]] = None
    h: Optional[List[float]] = None
    box: Tuple[float, float, float, float] = (-1.0, 1.0, -1.0, 1.0)

    @field_validator("nx", "h", "box", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)

    @model_validator(mode="after")
    def check_levels(self):
        if self.nx is not None and self.h is not None:
            raise ValueError("give either nx or h, not both")
        if self.nx is None and self.h is None:
            self.h = [0.5, 0.3, 0.15, 0.08]
        if self.nx is not None and any(n < 1 for n in self.nx):
            raise ValueError(f"nx values must be >= 1, got {self.nx}")
        if self.h is not None and any(h <= 0 for h in self.h):
            raise ValueError(f"h values must be > 0, got {self.h}")
        xmin, xmax, ymin, ymax = self.box
        if not (xmax > xmin and ymax > ymin):
            raise ValueError(f"degenerate box {self.box}")
        return self


class OutputSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    output_dir: str = Field(default_factory=lambda: Config.OUTPUT_DIR)
    seed: int = 0


class InequalitySection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: float = Field(1.5, ge=1.0, lt=2.0)
    n_samples: int = Field(200, ge=1)


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    model: ModelSection
    discretization: DiscretizationSection
    solver: SolverSection = Field(default_factory=SolverSection)
    mesh: MeshSection = Field(default_factory=MeshSection)
    output: OutputSection = Field(default_factory=OutputSection)
    inequalities: InequalitySection = Field(default_factory=InequalitySection)

    def solver_config(self, alpha: float, beta: float, omega: float) -> SolverConfig:
        return SolverConfig(
            scheme=self.solver.scheme,
            omega=omega,
            tol=self.solver.tol,
            n_max=self.solver.n_max,
            alpha=alpha,
            beta=beta,
            mu=self.model.mu,
            rho=self.model.rho,
        )
