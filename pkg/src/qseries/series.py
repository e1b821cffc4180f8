"""
Basic hypergeometric series r phi s.

    r phi s (a_1..a_r; b_1..b_s; q, z)
        = sum_k (a_1..a_r; q)_k / (q, b_1..b_s; q)_k
                * ((-1)^k q^C(k,2))^(1+s-r) z^k

Terms are generated by their ratio recursion. A series whose numerator holds
q^(-N) stops after N+1 terms; every other series is truncated once the terms
stay below EPS_SERIES relative to the partial sum for KAPPA terms in a row.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.core.errors import ConvergenceError, DomainError, NumericalRangeError, PoleError
from src.qseries.accumulator import Accumulator
from src.qseries.base import QBase, QLike
from src.qseries.logcomplex import LogComplex, log_one_minus, log_sum_with_abs

log = logging.getLogger(__name__)

# Termination detection
TERMINATION_RTOL = 1e-12
TERMINATION_MAX_DEGREE = 512

# Non-terminating truncation
EPS_SERIES = 1e-16
KAPPA = 3
MAX_SERIES_TERMS = 100_000

# |1 - b q^k| below this counts as a pole
POLE_TOL = 1e-12


@dataclass(frozen=True)
class SeriesSpec:
    """Parameters of one r phi s evaluation"""
    numerator_params: Tuple[complex, ...]
    denominator_params: Tuple[complex, ...]
    base: QBase
    argument: complex

    def __post_init__(self):
        object.__setattr__(self, "numerator_params", tuple(complex(a) for a in self.numerator_params))
        object.__setattr__(self, "denominator_params", tuple(complex(b) for b in self.denominator_params))
        if not isinstance(self.base, QBase):
            object.__setattr__(self, "base", QBase(self.base))
        object.__setattr__(self, "argument", complex(self.argument))

    @classmethod
    def make(cls, numerator: Sequence[complex], denominator: Sequence[complex],
             q: QLike, z: complex) -> "SeriesSpec":
        return cls(tuple(numerator), tuple(denominator), q if isinstance(q, QBase) else QBase(q), z)

    @property
    def r(self) -> int:
        return len(self.numerator_params)

    @property
    def s(self) -> int:
        return len(self.denominator_params)

    @property
    def q(self) -> float:
        return self.base.q

    @property
    def terminating_degree(self) -> Optional[int]:
        """Smallest N with a numerator parameter equal to q^(-N), else None"""
        q = self.base.q
        best: Optional[int] = None
        for a in self.numerator_params:
            degree = _match_negative_power(a, q)
            if degree is not None and (best is None or degree < best):
                best = degree
        return best

    @property
    def is_terminating(self) -> bool:
        return self.terminating_degree is not None


@dataclass
class SeriesResult:
    """Value of a series plus what is needed for a rounding-error estimate"""
    value: complex
    abs_sum: float
    n_terms: int
    terminating: bool


def _match_negative_power(a: complex, q: float) -> Optional[int]:
    if a == 0:
        return None
    if q == 1.0:
        return 0 if abs(a - 1.0) <= TERMINATION_RTOL else None
    if abs(a.imag) > TERMINATION_RTOL * abs(a) or a.real <= 0:
        return None
    degree = round(math.log(a.real) / -math.log(q))
    if degree < 0 or degree > TERMINATION_MAX_DEGREE:
        return None
    target = q ** (-degree)
    if abs(a - target) <= TERMINATION_RTOL * target:
        return degree
    return None


def _check_convergence(spec: SeriesSpec):
    if spec.q >= 1.0:
        raise DomainError("a non-terminating series needs q < 1")
    if spec.r > spec.s + 1:
        raise ConvergenceError(
            f"{spec.r}phi{spec.s} with r > s+1 diverges unless it terminates"
        )
    if spec.r == spec.s + 1 and abs(spec.argument) >= 1.0:
        raise ConvergenceError(
            f"{spec.r}phi{spec.s} needs |z| < 1, got |z|={abs(spec.argument)!r}"
        )


def _check_denominators(spec: SeriesSpec, power: float, k: int):
    for b in spec.denominator_params:
        if abs(1.0 - b * power) <= POLE_TOL:
            raise PoleError(f"denominator parameter {b!r} equals q^(-{k})")


def sum_phi(spec: SeriesSpec) -> SeriesResult:
    """Sum the series in direct floating point with compensated accumulation"""
    q = spec.q
    degree = spec.terminating_degree
    if degree is None:
        _check_convergence(spec)
    extra = 1 + spec.s - spec.r
    z = spec.argument

    acc = Accumulator()
    term: complex = 1.0 + 0j
    acc.add(term)
    power = 1.0  # q^k
    small_run = 0
    k = 0
    limit = degree if degree is not None else MAX_SERIES_TERMS
    while k < limit:
        _check_denominators(spec, power, k)
        ratio = z
        for a in spec.numerator_params:
            ratio *= 1.0 - a * power
        for b in spec.denominator_params:
            ratio /= 1.0 - b * power
        ratio /= 1.0 - power * q
        if extra:
            ratio *= (-power) ** extra
        term *= ratio
        k += 1
        power *= q
        if not cmath.isfinite(term):
            raise NumericalRangeError(
                f"term {k} of {spec.r}phi{spec.s} overflows; use eval_phi_log"
            )
        acc.add(term)
        if degree is None:
            if abs(term) <= EPS_SERIES * abs(acc.value):
                small_run += 1
                if small_run >= KAPPA:
                    break
            else:
                small_run = 0
    else:
        if degree is None:
            raise ConvergenceError(
                f"{spec.r}phi{spec.s} not converged after {MAX_SERIES_TERMS} terms"
            )
    return SeriesResult(acc.value, acc.abs_sum, k + 1, degree is not None)


def eval_phi(spec: SeriesSpec) -> complex:
    """
    Evaluate r phi s directly.

    Raises:
        ConvergenceError: non-terminating with |z| >= 1 (r = s+1) or r > s+1
        PoleError: a denominator parameter equals q^(-j) before termination
        NumericalRangeError: terms overflow double precision
    """
    return sum_phi(spec).value


def log_terms(spec: SeriesSpec) -> List[LogComplex]:
    """All retained terms of the series, each carried as LogComplex"""
    q = spec.q
    degree = spec.terminating_degree
    if degree is None:
        _check_convergence(spec)
    extra = 1 + spec.s - spec.r
    log_q = math.log(q)
    log_num = [None if a == 0 else cmath.log(a) for a in spec.numerator_params]
    log_den = [None if b == 0 else cmath.log(b) for b in spec.denominator_params]
    if spec.argument == 0:
        return [LogComplex(0.0, 0.0)]
    log_z = cmath.log(spec.argument)

    terms = [LogComplex(0.0, 0.0)]
    log_term = 0j
    max_log = 0.0
    small_run = 0
    k = 0
    limit = degree if degree is not None else MAX_SERIES_TERMS
    while k < limit:
        shift = k * log_q
        for b, log_b in zip(spec.denominator_params, log_den):
            if log_b is None:
                continue
            # |log(b q^k)| ~ |1 - b q^k| near the pole
            if abs(log_b + shift) <= POLE_TOL:
                raise PoleError(f"denominator parameter {b!r} equals q^(-{k})")
            log_term -= log_one_minus(log_b + shift)
        for log_a in log_num:
            if log_a is None:
                continue
            log_term += log_one_minus(log_a + shift)
        log_term -= log_one_minus((k + 1) * log_q)
        log_term += log_z
        if extra:
            log_term += extra * complex(shift, math.pi)
        k += 1
        if log_term.real == -math.inf:
            break
        term = LogComplex.from_log(log_term)
        terms.append(term)
        if degree is None:
            max_log = max(max_log, term.log_magnitude)
            if term.log_magnitude <= math.log(EPS_SERIES) + max_log:
                small_run += 1
                if small_run >= KAPPA:
                    break
            else:
                small_run = 0
    else:
        if degree is None:
            raise ConvergenceError(
                f"{spec.r}phi{spec.s} not converged after {MAX_SERIES_TERMS} terms"
            )
    return terms


def eval_phi_log(spec: SeriesSpec) -> LogComplex:
    """
    Evaluate r phi s with every term carried as (log |t|, arg t).

    Terms are summed largest first with compensated accumulation, so the
    result is finite whenever the sum is representable in log form even if
    single terms over- or underflow. Non-terminating series are truncated
    against the largest term seen so far rather than the running sum.
    """
    return log_sum_with_abs(log_terms(spec))[0]
