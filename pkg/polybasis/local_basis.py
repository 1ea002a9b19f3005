from dataclasses import dataclass

from app.constants import BasisKind


@dataclass(frozen=True)
class LocalBasis:
    """Descriptor of one basis function: what it is, its degree and the entity owning it."""

    kind: BasisKind
    degree: int
    owner: int
    mode: int = 0
