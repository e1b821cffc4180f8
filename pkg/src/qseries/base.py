"""
QBase - the deformation base q shared by every q-series routine.
"""
import math
from dataclasses import dataclass
from typing import Union

from src.core.errors import DomainError


@dataclass(frozen=True)
class QBase:
    """Base of a q-series, 0 < q <= 1"""
    q: float

    def __post_init__(self):
        q = float(self.q)
        if not math.isfinite(q) or q <= 0.0 or q > 1.0:
            raise DomainError(f"q must lie in (0, 1], got {self.q!r}")
        object.__setattr__(self, "q", q)

    @property
    def is_classical(self) -> bool:
        return self.q == 1.0

    @property
    def log_q(self) -> float:
        return math.log(self.q)


QLike = Union[QBase, float]


def as_q(q: QLike) -> float:
    """Validated float value of a base given as QBase or number"""
    if isinstance(q, QBase):
        return q.q
    return QBase(q).q
