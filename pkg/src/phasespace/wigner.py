"""
Wigner distribution of the q-oscillator in closed form.

Four equivalent closed forms are provided:

    DOUBLE_SUM        (1/pi hbar) q^n/(q;q)_n e^(-2H/hbar w)
                      * sum_{k,s} (-1)^(k+s) [n k][n s] q^(C(k,2)+C(s,2)+ks) e^(-k a* - s a)
    SINGLE_SUM        the double sum with the k-sum done by the q-binomial theorem
    HYPER_3PHI2       ((-1)^n/pi hbar) q^(-C(n,2)) e^(-2H/hbar w)
                      * 3phi2(q^-n, q^n e^-a, q^n e^-a*; q, 0; q, q)
    AL_SALAM_CHIHARA  ((-1)^n/pi hbar) q^(n(n+1)/2)/(q;q)_n e^(-n h p/hbar) e^(-2H/hbar w)
                      * Q_n(cos 2 lambda h x; q^n e^(-hp/hbar), q^(1-n) e^(hp/hbar) | q)

with a = h p / hbar + 2 i lambda h x. The sums are ill-conditioned in opposite
regimes (the double and single sums as q -> 1, the 3phi2 and Al-Salam-Chihara
forms as q -> 0). Every evaluation carries a rounding-error estimate, and a
form whose estimate is too large hands over to its complementary form.
"""
import cmath
import logging
import math
import threading
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

from src.core.errors import DomainError, InternalConsistencyError, NumericalRangeError
from src.oscillator.model import ModelParams, as_state
from src.polynomials.families import ASCParams, al_salam_chihara_with_bound, laguerre
from src.qseries.accumulator import Accumulator
from src.qseries.base import as_q
from src.qseries.cache import get_cache
from src.qseries.logcomplex import LogComplex, log_sum_with_abs
from src.qseries.pochhammer import check_count, log_q_factorial, q_binomial_row, q_pochhammer
from src.qseries.series import SeriesSpec, sum_phi

log = logging.getLogger(__name__)

ROUNDOFF = 2.0 ** -53

# Fallback when the error estimate exceeds this fraction of 1/(pi hbar);
# cross-form agreement is asserted at 1e-9 of the grid maximum
FALLBACK_TOLERANCE = 1e-10

# Exponents beyond this move the double sum to LogComplex terms
LOG_PATH_THRESHOLD = 500.0

# Largest exponent handed to exp() for a prefactor
MAX_EXP = 700.0

REALNESS_RTOL = 1e-10


class WignerForm(Enum):
    """Closed forms (and the integral definition) of the Wigner function"""
    DOUBLE_SUM = "dsum"
    SINGLE_SUM = "ssum"
    HYPER_3PHI2 = "hyper"
    AL_SALAM_CHIHARA = "asc"
    INTEGRAL_ORACLE = "integral"


CLOSED_FORMS = (
    WignerForm.DOUBLE_SUM,
    WignerForm.SINGLE_SUM,
    WignerForm.HYPER_3PHI2,
    WignerForm.AL_SALAM_CHIHARA,
)

# Form to try when one is ill-conditioned
COMPLEMENT = {
    WignerForm.DOUBLE_SUM: WignerForm.HYPER_3PHI2,
    WignerForm.SINGLE_SUM: WignerForm.HYPER_3PHI2,
    WignerForm.HYPER_3PHI2: WignerForm.DOUBLE_SUM,
    WignerForm.AL_SALAM_CHIHARA: WignerForm.DOUBLE_SUM,
}


@dataclass(frozen=True)
class PhasePoint:
    """Point (p, x) of phase space"""
    p: float
    x: float

    def __post_init__(self):
        p, x = float(self.p), float(self.x)
        if not (math.isfinite(p) and math.isfinite(x)):
            raise DomainError(f"phase-space point must be finite, got ({self.p!r}, {self.x!r})")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "x", x)


def as_point(point) -> PhasePoint:
    """Accept a PhasePoint or a (p, x) pair"""
    if isinstance(point, PhasePoint):
        return point
    p, x = point
    return PhasePoint(p, x)


@dataclass(frozen=True)
class DeformedArgument:
    """a = h p / hbar + 2 i lambda h x"""
    a: complex

    @classmethod
    def at(cls, point: PhasePoint, params: ModelParams) -> "DeformedArgument":
        return cls(complex(params.h * point.p / params.hbar, 2.0 * params.lam * params.h * point.x))

    @property
    def conj(self) -> complex:
        return self.a.conjugate()


@dataclass(frozen=True)
class FormEvaluation:
    """Value of one closed form with its rounding-error estimate"""
    value: float
    error_estimate: float
    form: WignerForm
    fallback_from: Optional[WignerForm] = None


def error_constant(n: int) -> float:
    return 8.0 * n + 16.0


def envelope_exponent(point: PhasePoint, params: ModelParams) -> float:
    """-2H / (hbar omega) = -2 lambda x^2 - p^2 / (2 lambda hbar^2)"""
    lam, hbar = params.lam, params.hbar
    return -2.0 * lam * point.x ** 2 - point.p ** 2 / (2.0 * lam * hbar * hbar)


def _check_real(raw: complex, rounding: float, form: WignerForm, floor: float = 1.0):
    tolerance = max(REALNESS_RTOL * max(floor, abs(raw.real)), rounding)
    if abs(raw.imag) > tolerance:
        raise InternalConsistencyError(
            f"{form.value}: imaginary residue {raw.imag:.3e} exceeds {tolerance:.3e}"
        )


# ============================================================================
# Double sum
# ============================================================================

def _dsum_table(n: int, q: float) -> Tuple[Tuple[float, ...], ...]:
    def build():
        row = q_binomial_row(n, q)
        log_q = math.log(q)
        return tuple(
            tuple((-1.0) ** (k + s) * row[k] * row[s] * math.exp((k + s) * (k + s - 1) // 2 * log_q)
                  for s in range(n + 1))
            for k in range(n + 1)
        )
    return get_cache().get_or_build(("wigner_dsum", n, q), build)


def _dsum_log_table(n: int, q: float) -> Tuple[Tuple[Tuple[float, bool], ...], ...]:
    """(log |c_ks|, c_ks < 0) with C(k,2) + C(s,2) + ks = C(k+s,2)"""
    def build():
        log_row = [math.log(c) for c in q_binomial_row(n, q)]
        log_q = math.log(q)
        return tuple(
            tuple((log_row[k] + log_row[s] + (k + s) * (k + s - 1) // 2 * log_q, (k + s) % 2 == 1)
                  for s in range(n + 1))
            for k in range(n + 1)
        )
    return get_cache().get_or_build(("wigner_dsum_log", n, q), build)


def _dsum_raw(n: int, point: PhasePoint, params: ModelParams) -> FormEvaluation:
    q, lam, h = params.q, params.lam, params.h
    form = WignerForm.DOUBLE_SUM
    envelope = envelope_exponent(point, params)
    log_pref = n * params.log_q - log_q_factorial(n, q, params.log_q) - math.log(math.pi * params.hbar)
    hp = h * point.p / params.hbar
    exponents = (abs(envelope), 2 * n * abs(hp), lam * h * h * n * (2 * n - 1), abs(log_pref))
    if max(exponents) > LOG_PATH_THRESHOLD:
        return _dsum_log(n, point, params, envelope + log_pref)

    table = _dsum_table(n, q)
    a = DeformedArgument.at(point, params).a
    u, v = cmath.exp(-a.conjugate()), cmath.exp(-a)
    acc = Accumulator()
    u_power = 1.0 + 0j
    for k in range(n + 1):
        row = table[k]
        term = u_power
        for s in range(n + 1):
            acc.add(row[s] * term)
            term *= v
        u_power *= u
    raw = acc.value
    rounding = error_constant(n) * ROUNDOFF * acc.abs_sum
    _check_real(raw, rounding, form)
    scale = math.exp(log_pref + envelope)
    return FormEvaluation(scale * raw.real, scale * rounding, form)


def _dsum_log(n: int, point: PhasePoint, params: ModelParams, log_scale: float) -> FormEvaluation:
    """Double sum with envelope and prefactor folded into every LogComplex term"""
    table = _dsum_log_table(n, params.q)
    hp = params.h * point.p / params.hbar
    theta = 2.0 * params.lam * params.h * point.x
    terms: List[LogComplex] = []
    for k in range(n + 1):
        for s in range(n + 1):
            log_c, negative = table[k][s]
            phase = theta * (k - s) + (math.pi if negative else 0.0)
            terms.append(LogComplex(log_scale + log_c - (k + s) * hp, phase))
    total, log_abs = log_sum_with_abs(terms)
    value = total.to_complex()
    rounding = error_constant(n) * ROUNDOFF * math.exp(min(log_abs, MAX_EXP))
    _check_real(value, rounding, WignerForm.DOUBLE_SUM, floor=0.0)
    return FormEvaluation(value.real, rounding, WignerForm.DOUBLE_SUM)


# ============================================================================
# Single sum
# ============================================================================

def _ssum_raw(n: int, point: PhasePoint, params: ModelParams) -> FormEvaluation:
    q = params.q
    form = WignerForm.SINGLE_SUM
    envelope = envelope_exponent(point, params)
    log_pref = n * params.log_q - log_q_factorial(n, q, params.log_q) - math.log(math.pi * params.hbar)
    hp = params.h * point.p / params.hbar
    if n * abs(hp) > MAX_EXP or abs(log_pref + envelope) > MAX_EXP:
        raise NumericalRangeError(f"single sum out of range at n={n}, q={q!r}, p={point.p!r}")
    a = DeformedArgument.at(point, params).a
    u, v = cmath.exp(-a.conjugate()), cmath.exp(-a)
    row = q_binomial_row(n, q)
    log_q = params.log_q
    acc = Accumulator()
    bound = 0.0
    v_power = 1.0 + 0j
    for s in range(n + 1):
        coefficient = (-1.0) ** s * row[s] * math.exp(s * (s - 1) // 2 * log_q)
        shifted = q ** s * u
        term = coefficient * v_power * q_pochhammer(shifted, q, n)
        if not cmath.isfinite(term):
            raise NumericalRangeError(f"single sum term {s} overflows at n={n}, q={q!r}")
        acc.add(term)
        bound += abs(coefficient * v_power) * math.prod(1.0 + abs(shifted) * q ** j for j in range(n))
        v_power *= v
    raw = acc.value
    rounding = error_constant(n) * ROUNDOFF * bound
    _check_real(raw, rounding, form)
    scale = math.exp(log_pref + envelope)
    return FormEvaluation(scale * raw.real, scale * rounding, form)


# ============================================================================
# 3phi2 and Al-Salam-Chihara
# ============================================================================

def _hyper_raw(n: int, point: PhasePoint, params: ModelParams) -> FormEvaluation:
    q, log_q = params.q, params.log_q
    form = WignerForm.HYPER_3PHI2
    blowup = -(n * (n - 1) // 2) * log_q
    if blowup > MAX_EXP or -n * log_q > MAX_EXP:
        raise NumericalRangeError(f"q^(-C(n,2)) overflows at n={n}, q={q!r}")
    a = DeformedArgument.at(point, params).a
    log_shift = n * log_q - a
    if abs(log_shift.real) > MAX_EXP:
        raise NumericalRangeError(f"q^n e^(-a) out of range at n={n}, q={q!r}, p={point.p!r}")
    shifted = cmath.exp(log_shift)
    spec = SeriesSpec.make([q ** (-n), shifted, shifted.conjugate()], [q, 0.0], q, q)
    result = sum_phi(spec)
    log_pref = blowup + envelope_exponent(point, params) - math.log(math.pi * params.hbar)
    if log_pref > MAX_EXP:
        raise NumericalRangeError(f"3phi2 prefactor overflows at n={n}, q={q!r}")
    rounding = error_constant(n) * ROUNDOFF * result.abs_sum
    _check_real(result.value, rounding, form)
    scale = (-1.0) ** n * math.exp(log_pref)
    return FormEvaluation(scale * result.value.real, abs(scale) * rounding, form)


def _asc_raw(n: int, point: PhasePoint, params: ModelParams) -> FormEvaluation:
    q, log_q = params.q, params.log_q
    form = WignerForm.AL_SALAM_CHIHARA
    hp = params.h * point.p / params.hbar
    log_alpha = n * log_q - hp
    log_beta = (1 - n) * log_q + hp
    if max(abs(log_alpha), abs(log_beta)) > MAX_EXP:
        raise NumericalRangeError(f"Al-Salam-Chihara parameters out of range at n={n}, q={q!r}")
    asc = ASCParams(
        math.cos(2.0 * params.lam * params.h * point.x),
        math.exp(log_alpha),
        math.exp(log_beta),
        params.base,
    )
    value, bound = al_salam_chihara_with_bound(n, asc)
    if not cmath.isfinite(value):
        raise NumericalRangeError(f"Al-Salam-Chihara value overflows at n={n}, q={q!r}")
    log_pref = (n * (n + 1) // 2 * log_q - log_q_factorial(n, q, log_q) - n * hp
                + envelope_exponent(point, params) - math.log(math.pi * params.hbar))
    if log_pref > MAX_EXP:
        raise NumericalRangeError(f"Al-Salam-Chihara prefactor overflows at n={n}, q={q!r}")
    rounding = error_constant(n) * ROUNDOFF * bound
    _check_real(value, rounding, form)
    scale = (-1.0) ** n * math.exp(log_pref)
    return FormEvaluation(scale * value.real, abs(scale) * rounding, form)


_RAW_FORMS: Dict[WignerForm, Callable[[int, PhasePoint, ModelParams], FormEvaluation]] = {
    WignerForm.DOUBLE_SUM: _dsum_raw,
    WignerForm.SINGLE_SUM: _ssum_raw,
    WignerForm.HYPER_3PHI2: _hyper_raw,
    WignerForm.AL_SALAM_CHIHARA: _asc_raw,
}


# ============================================================================
# Public entry points
# ============================================================================

_fallback_notices = set()
_fallback_lock = threading.Lock()


def _notice_fallback(form: WignerForm, used: WignerForm, n: int, q: float, reason: str):
    key = (form, used, n, q)
    with _fallback_lock:
        if key in _fallback_notices:
            return
        _fallback_notices.add(key)
    log.info(f"{form.value} -> {used.value} for n={n}, q={q:.6g}: {reason}")


def wigner_ho(state, point, params: ModelParams) -> float:
    """((-1)^n / pi hbar) e^(-2H/hbar w) L_n(4H/hbar w)"""
    n = as_state(state).n
    point = as_point(point)
    two_h = -envelope_exponent(point, params)
    return (-1.0) ** n / (math.pi * params.hbar) * math.exp(-two_h) * laguerre(n, 2.0 * two_h)


def evaluate_form(form: WignerForm, state, point, params: ModelParams,
                  allow_fallback: bool = True) -> FormEvaluation:
    """
    Evaluate one closed form of the Wigner function.

    Args:
        form: Closed form to use
        state: QuantumState or photon number
        point: PhasePoint or (p, x)
        params: Model parameters; h = 0 returns the oscillator form
        allow_fallback: Hand over to the complementary form when the error
            estimate exceeds FALLBACK_TOLERANCE / (pi hbar) or the prefactor
            overflows

    Returns:
        FormEvaluation with the value actually used
    """
    if form not in _RAW_FORMS:
        raise DomainError(f"{form.value} is not a closed form")
    n = as_state(state).n
    point = as_point(point)
    if params.is_classical:
        value = wigner_ho(n, point, params)
        return FormEvaluation(value, error_constant(n) * ROUNDOFF / (math.pi * params.hbar), form)
    if not allow_fallback:
        return _RAW_FORMS[form](n, point, params)

    threshold = FALLBACK_TOLERANCE / (math.pi * params.hbar)
    candidates = [form]
    for extra in (COMPLEMENT[form], WignerForm.DOUBLE_SUM):
        if extra not in candidates:
            candidates.append(extra)

    best: Optional[FormEvaluation] = None
    reason = ""
    for candidate in candidates:
        try:
            evaluation = _RAW_FORMS[candidate](n, point, params)
        except NumericalRangeError as e:
            reason = str(e)
            continue
        if best is None or evaluation.error_estimate < best.error_estimate:
            best = evaluation
        if evaluation.error_estimate <= threshold:
            best = evaluation
            break
        reason = f"error estimate {evaluation.error_estimate:.2e} above {threshold:.2e}"
    if best is None:
        raise NumericalRangeError(f"no closed form representable at n={n}, q={params.q!r}")
    if best.form is not form:
        _notice_fallback(form, best.form, n, params.q, reason)
        return FormEvaluation(best.value, best.error_estimate, best.form, fallback_from=form)
    return best


def wigner_dsum(state, point, params: ModelParams) -> float:
    """Double-sum closed form (the reference form)"""
    return evaluate_form(WignerForm.DOUBLE_SUM, state, point, params).value


def wigner_ssum(state, point, params: ModelParams) -> float:
    """Single-sum closed form"""
    return evaluate_form(WignerForm.SINGLE_SUM, state, point, params).value


def wigner_3phi2(state, point, params: ModelParams) -> float:
    """3phi2 closed form, falls back to the double sum when q^(-C(n,2)) is too large"""
    return evaluate_form(WignerForm.HYPER_3PHI2, state, point, params).value


def wigner_asc(state, point, params: ModelParams) -> float:
    """Al-Salam-Chihara closed form"""
    return evaluate_form(WignerForm.AL_SALAM_CHIHARA, state, point, params).value


def wigner(state, point, params: ModelParams, form: WignerForm = WignerForm.DOUBLE_SUM) -> float:
    """Wigner function by any form, including the integral definition"""
    if form is WignerForm.INTEGRAL_ORACLE:
        from src.quadrature.oracles import wigner_oracle_x
        return wigner_oracle_x(state, point, params)
    return evaluate_form(form, state, point, params).value


def wigner_largeh(state, point, params: ModelParams) -> float:
    """Displaced Gaussian (1/pi hbar) exp(-(p - pbar)^2 / m hbar w - m w x^2 / hbar), pbar = -n m w h"""
    n = as_state(state).n
    point = as_point(point)
    m, omega, hbar = params.m, params.omega, params.hbar
    shift = point.p + n * m * omega * params.h
    return math.exp(-shift ** 2 / (m * hbar * omega) - m * omega * point.x ** 2 / hbar) / (math.pi * hbar)


# ============================================================================
# Trace identity
# ============================================================================

def _log_factor(exponent: int, log_q: float) -> Tuple[float, bool]:
    """(log |1 - q^e|, 1 - q^e < 0) for integer e; log = -inf at e = 0"""
    if exponent == 0:
        return -math.inf, False
    if exponent > 0:
        return math.log(-math.expm1(exponent * log_q)), False
    return exponent * log_q + math.log(-math.expm1(-exponent * log_q)), True


def _log_int_pochhammer(start: int, count: int, log_q: float) -> Tuple[float, bool]:
    """prod_{j<count} (1 - q^(start+j)) as (log |.|, negative)"""
    total, negative = 0.0, False
    for j in range(count):
        log_f, neg = _log_factor(start + j, log_q)
        if log_f == -math.inf:
            return -math.inf, False
        total += log_f
        negative ^= neg
    return total, negative


def _trace_sum(n: int, m: int, log_q: float) -> LogComplex:
    """sum_k (q^n)^k (q^-n;q)_k / (q;q)_k * (q^-k;q)_m"""
    terms = []
    for k in range(n + 1):
        log_a, neg_a = _log_int_pochhammer(-n, k, log_q)
        log_b, _ = _log_int_pochhammer(1, k, log_q)
        log_c, neg_c = _log_int_pochhammer(-k, m, log_q)
        if log_c == -math.inf:
            continue
        terms.append(LogComplex(n * k * log_q + log_a - log_b + log_c,
                                math.pi if neg_a ^ neg_c else 0.0))
    return log_sum_with_abs(terms)[0]


def orthogonality_sum(n: int, m: int, q: float) -> float:
    """
    The sum that the trace identity reduces to after the Gaussian integrals,

        q^(n+m) / ((q;q)_n (q;q)_m)
            * sum_k (q^n)^k (q^-n;q)_k/(q;q)_k (q^-k;q)_m
            * sum_k' (q^m)^k' (q^-m;q)_k'/(q;q)_k' (q^-k';q)_n

    Every term but k = k' = n = m vanishes exactly, so the result is delta_nm.
    """
    n, m = check_count(n), check_count(m, "m")
    if n > 32 or m > 32:
        raise DomainError(f"orthogonality_sum supports n, m <= 32, got n={n}, m={m}")
    q = as_q(q)
    if q >= 1.0:
        raise DomainError("orthogonality_sum needs q < 1")
    log_q = math.log(q)
    first = _trace_sum(n, m, log_q)
    second = _trace_sum(m, n, log_q)
    if first.is_zero or second.is_zero:
        return 0.0
    log_pref = (n + m) * log_q - log_q_factorial(n, q) - log_q_factorial(m, q)
    return (first * second).scale(log_pref).to_complex().real
