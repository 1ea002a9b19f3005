"""Exception vocabulary shared by every package."""

from typing import Optional


class CrForchheimerError(Exception):
    """Base class of every error raised on purpose by this project."""


class InvalidArgumentError(CrForchheimerError, ValueError):
    pass


class MeshParseError(CrForchheimerError, ValueError):
    pass


class MeshIndexError(CrForchheimerError, IndexError):
    pass


class StructuralError(CrForchheimerError, ValueError):
    """Nonconforming connectivity or objects living on different meshes."""


class InvalidMeshError(CrForchheimerError, ValueError):
    pass


class DomainError(CrForchheimerError, ValueError):
    pass


class CapabilityError(CrForchheimerError, NotImplementedError):
    pass


class DataError(CrForchheimerError, ValueError):
    pass


class InternalError(CrForchheimerError, RuntimeError):
    pass


class RankError(CrForchheimerError, RuntimeError):
    def __init__(self, message: str, deficiency: Optional[int] = None):
        super().__init__(message)
        self.deficiency = deficiency


class DivergenceError(CrForchheimerError, RuntimeError):
    def __init__(self, message: str, iteration: int):
        super().__init__(message)
        self.iteration = iteration


class CaseConstructionError(CrForchheimerError, ValueError):
    def __init__(self, identity: str, max_residual: float):
        super().__init__(
            f"manufactured case violates '{identity}' (max residual {max_residual:.3e})"
        )
        self.identity = identity
        self.max_residual = max_residual


class ConfigError(CrForchheimerError, ValueError):
    pass
