"""
Model parameters of the q-deformed oscillator.

lambda = m omega / (2 hbar) and q = exp(-lambda h^2). The oscillator is classical
when q = 1 in floating point: h = 0, or a step so small that lambda h^2 is
below the rounding of 1.
"""
import logging
import math
from dataclasses import dataclass, field

from src.core.errors import DomainError
from src.polynomials.families import N_MAX
from src.qseries.base import QBase
from src.qseries.pochhammer import check_count, q_number

log = logging.getLogger(__name__)


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return value


@dataclass(frozen=True)
class ModelParams:
    """Physical constants (m, omega, hbar) and deformation step h"""
    m: float
    omega: float
    hbar: float
    h: float
    lam: float = field(init=False)
    log_q: float = field(init=False)
    q: float = field(init=False)

    def __post_init__(self):
        m = _positive("m", self.m)
        omega = _positive("omega", self.omega)
        hbar = _positive("hbar", self.hbar)
        h = float(self.h)
        if not math.isfinite(h) or h < 0.0:
            raise DomainError(f"h must be a nonnegative finite number, got {self.h!r}")
        lam = m * omega / (2.0 * hbar)
        log_q = -lam * h * h
        q = 1.0 if h == 0.0 else math.exp(log_q)
        if q <= 0.0:
            raise DomainError(f"q = exp({log_q!r}) underflows; h={h!r} is too large")
        for name, value in (("m", m), ("omega", omega), ("hbar", hbar), ("h", h),
                            ("lam", lam), ("log_q", log_q), ("q", q)):
            object.__setattr__(self, name, value)

    @classmethod
    def from_q(cls, q: float, m: float = 1.0, omega: float = 1.0, hbar: float = 1.0) -> "ModelParams":
        """Parameters for a given q, with h = sqrt(-ln q / lambda)"""
        q = QBase(q).q
        lam = _positive("m", m) * _positive("omega", omega) / (2.0 * _positive("hbar", hbar))
        h = 0.0 if q == 1.0 else math.sqrt(-math.log(q) / lam)
        return cls(m, omega, hbar, h)

    @property
    def base(self) -> QBase:
        return QBase(self.q)

    @property
    def is_classical(self) -> bool:
        return self.q == 1.0

    def describe(self) -> dict:
        """Key/value view used for output metadata"""
        return {"m": self.m, "omega": self.omega, "hbar": self.hbar, "h": self.h,
                "lambda": self.lam, "q": self.q}


def make_params(m: float = 1.0, omega: float = 1.0, hbar: float = 1.0, h: float = 0.0) -> ModelParams:
    """Build ModelParams; nonpositive constants raise DomainError"""
    return ModelParams(m, omega, hbar, h)


@dataclass(frozen=True)
class QuantumState:
    """Stationary state with photon number n"""
    n: int

    def __post_init__(self):
        n = check_count(self.n)
        if n > N_MAX:
            raise DomainError(f"n={n} exceeds n_max = {N_MAX}")
        object.__setattr__(self, "n", n)


@dataclass(frozen=True)
class EnergyLevel:
    value: float


def as_state(state) -> QuantumState:
    """Accept a QuantumState or a bare photon number"""
    if isinstance(state, QuantumState):
        return state
    return QuantumState(state)


def energy(state, params: ModelParams) -> EnergyLevel:
    """E_{n,q} = hbar omega [n + 1/2]_q"""
    n = as_state(state).n
    return EnergyLevel(params.hbar * params.omega * q_number(n + 0.5, params.q))
