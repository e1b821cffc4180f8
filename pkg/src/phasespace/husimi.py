"""
Husimi distribution of the q-oscillator

    Wbar = (1/2 pi hbar) q^n (e^(-a/2);q)_n (e^(-a*/2);q)_n / (q;q)_n e^(-H/hbar w)

The two Pochhammer symbols are complex conjugates, so the product is real and
nonnegative. Large exponents are handled with log-Pochhammer symbols.
"""
import cmath
import logging
import math

from src.core.errors import InternalConsistencyError
from src.oscillator.model import ModelParams, as_state
from src.phasespace.wigner import DeformedArgument, as_point, envelope_exponent
from src.qseries.logcomplex import log_one_minus
from src.qseries.pochhammer import log_q_factorial, q_pochhammer

log = logging.getLogger(__name__)

NEGATIVITY_TOLERANCE = 1e-12
LOG_PATH_THRESHOLD = 300.0


def husimi_ho(state, point, params: ModelParams) -> float:
    """(2 pi hbar n!)^-1 (H/hbar w)^n e^(-H/hbar w)"""
    n = as_state(state).n
    point = as_point(point)
    energy = -0.5 * envelope_exponent(point, params)
    if energy == 0.0:
        return 1.0 / (2.0 * math.pi * params.hbar) if n == 0 else 0.0
    return math.exp(n * math.log(energy) - energy - math.lgamma(n + 1)) / (2.0 * math.pi * params.hbar)


def husimi(state, point, params: ModelParams) -> float:
    """Closed-form Husimi function; h = 0 gives the oscillator form"""
    n = as_state(state).n
    point = as_point(point)
    if params.is_classical:
        return husimi_ho(n, point, params)
    q = params.q
    a = DeformedArgument.at(point, params).a
    energy = -0.5 * envelope_exponent(point, params)
    log_pref = (n * params.log_q - log_q_factorial(n, q, params.log_q) - energy
                - math.log(2.0 * math.pi * params.hbar))

    if n * abs(a.real) / 2.0 > LOG_PATH_THRESHOLD or abs(log_pref) > LOG_PATH_THRESHOLD:
        # |(e^(-a/2);q)_n|^2 in log form
        total = log_pref + 2.0 * _log_abs_pochhammer(-a / 2.0, params.log_q, n)
        return 0.0 if total == -math.inf else math.exp(total)

    first = q_pochhammer(cmath.exp(-a / 2.0), q, n)
    second = q_pochhammer(cmath.exp(-a.conjugate() / 2.0), q, n)
    product = first * second
    if abs(product.imag) > 1e-10 * max(abs(product), 1e-300):
        raise InternalConsistencyError(f"Husimi Pochhammer product {product!r} is not real")
    value = product.real * math.exp(log_pref)
    if value < -NEGATIVITY_TOLERANCE:
        raise InternalConsistencyError(f"Husimi value {value!r} is negative")
    return max(value, 0.0)


def _log_abs_pochhammer(log_a: complex, log_q: float, n: int) -> float:
    """log |(a;q)_n| from log a"""
    return math.fsum(log_one_minus(log_a + k * log_q).real for k in range(n))


def husimi_largeh(state, point, params: ModelParams) -> float:
    """Displaced Gaussian (1/2 pi hbar) exp(-(p - pbar)^2 / 2 m hbar w - m w x^2 / 2 hbar), pbar = -n m w h"""
    n = as_state(state).n
    point = as_point(point)
    m, omega, hbar = params.m, params.omega, params.hbar
    shift = point.p + n * m * omega * params.h
    return (math.exp(-shift ** 2 / (2.0 * m * hbar * omega) - m * omega * point.x ** 2 / (2.0 * hbar))
            / (2.0 * math.pi * hbar))
