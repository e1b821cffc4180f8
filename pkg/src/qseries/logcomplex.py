"""
LogComplex - complex numbers carried as (log |z|, arg z)
Used wherever the terms of a series over- or underflow in direct arithmetic.
"""
import cmath
import math
from dataclasses import dataclass
from typing import Iterable, List, Tuple

from src.qseries.accumulator import Accumulator

_NEG_INF = float("-inf")


def _wrap_phase(phase: float) -> float:
    """Map a phase into (-pi, pi]"""
    wrapped = math.remainder(phase, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


@dataclass(frozen=True)
class LogComplex:
    """Value exp(log_magnitude) * exp(i * phase); zero has log_magnitude = -inf"""
    log_magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "phase", _wrap_phase(self.phase) if math.isfinite(self.phase) else 0.0)

    @classmethod
    def zero(cls) -> "LogComplex":
        return cls(_NEG_INF, 0.0)

    @classmethod
    def from_complex(cls, value: complex) -> "LogComplex":
        if value == 0:
            return cls.zero()
        return cls(math.log(abs(value)), cmath.phase(value))

    @classmethod
    def from_log(cls, log_value: complex) -> "LogComplex":
        """Build from a complex logarithm log z = log|z| + i arg z"""
        log_value = complex(log_value)
        return cls(log_value.real, log_value.imag)

    @property
    def is_zero(self) -> bool:
        return self.log_magnitude == _NEG_INF

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        return cmath.rect(math.exp(self.log_magnitude), self.phase)

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_magnitude + other.log_magnitude, self.phase + other.phase)

    def scale(self, log_factor: float) -> "LogComplex":
        """Multiply by exp(log_factor) for a real log_factor"""
        if self.is_zero:
            return self
        return LogComplex(self.log_magnitude + log_factor, self.phase)


def log_one_minus(log_w: complex) -> complex:
    """
    Complex logarithm of (1 - w) given log w.

    Stays finite when w itself over- or underflows.
    """
    log_w = complex(log_w)
    if log_w.real > 30.0:
        # 1 - w = -w (1 - 1/w)
        return log_w + cmath.log(-1.0 + cmath.exp(-log_w))
    if log_w.real < -40.0:
        w = cmath.exp(log_w)
        return -w - 0.5 * w * w
    diff = 1.0 - cmath.exp(log_w)
    if diff == 0:
        return complex(_NEG_INF, 0.0)
    return cmath.log(diff)


def log_sum(terms: Iterable[LogComplex]) -> LogComplex:
    """Sum LogComplex terms"""
    return log_sum_with_abs(terms)[0]


def log_sum_with_abs(terms: Iterable[LogComplex]) -> Tuple[LogComplex, float]:
    """
    Sum LogComplex terms, also returning log of the sum of |terms|.

    Largest magnitude first, rescaled by the dominant term, compensated.
    """
    live: List[LogComplex] = [t for t in terms if not t.is_zero]
    if not live:
        return LogComplex.zero(), _NEG_INF
    live.sort(key=lambda t: t.log_magnitude, reverse=True)
    anchor = live[0].log_magnitude
    acc = Accumulator()
    for term in live:
        acc.add(cmath.rect(math.exp(term.log_magnitude - anchor), term.phase))
    log_abs = anchor + math.log(acc.abs_sum)
    total = acc.value
    if total == 0:
        return LogComplex.zero(), log_abs
    return LogComplex(anchor + math.log(abs(total)), cmath.phase(total)), log_abs
