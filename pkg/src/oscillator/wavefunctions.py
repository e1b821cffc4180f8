"""
Stationary-state wavefunctions in position and momentum representation.

    psi_n(x)  = c_n H_n(-exp(-2i lambda h x) | q) exp(-lambda x^2)
    psi~_n(p) = c_n (q;q)_n / sqrt(2 lambda hbar) S_n(q^(-1/2) exp(-h p / hbar); q)
                * exp(-p^2 / (4 lambda hbar^2))

h = 0 dispatches to the Hermite-Gaussian forms of the ordinary oscillator.
"""
import cmath
import logging
import math

from scipy import special

from src.core.errors import DomainError
from src.oscillator.model import ModelParams, as_state
from src.polynomials.families import hermite, rogers_szego, stieltjes_wigert
from src.qseries.pochhammer import log_q_factorial

log = logging.getLogger(__name__)

_MINUS_I_POWERS = (1.0 + 0j, -1j, -1.0 + 0j, 1j)


def minus_i_power(n: int) -> complex:
    """(-i)^n without rounding"""
    return _MINUS_I_POWERS[n % 4]


def norm_const(state, params: ModelParams) -> complex:
    """c_n = (2 lambda / pi)^(1/4) (-i)^n q^(n/2) (q;q)_n^(-1/2)"""
    n = as_state(state).n
    if params.is_classical and n > 0:
        raise DomainError("c_n is singular at h = 0; use the oscillator forms")
    log_mag = 0.25 * math.log(2.0 * params.lam / math.pi)
    if n > 0:
        log_mag += 0.5 * n * params.log_q - 0.5 * log_q_factorial(n, params.q, params.log_q)
    return minus_i_power(n) * math.exp(log_mag)


def psi_x(state, x: float, params: ModelParams) -> complex:
    """Position wavefunction psi_n(x)"""
    n = as_state(state).n
    if params.is_classical:
        return complex(psi_x_ho(n, x, params))
    lam = params.lam
    argument = -cmath.exp(-2j * lam * params.h * x)
    return norm_const(n, params) * rogers_szego(n, argument, params.q) * math.exp(-lam * x * x)


def psi_p(state, p: float, params: ModelParams) -> complex:
    """Momentum wavefunction psi~_n(p)"""
    n = as_state(state).n
    if params.is_classical:
        return psi_p_ho(n, p, params)
    lam, hbar, q = params.lam, params.hbar, params.q
    q_factorial = math.exp(log_q_factorial(n, q, params.log_q))
    prefactor = norm_const(n, params) * q_factorial / math.sqrt(2.0 * lam * hbar)
    argument = math.exp(-0.5 * params.log_q - params.h * p / hbar)
    envelope = math.exp(-p * p / (4.0 * lam * hbar * hbar))
    return prefactor * stieltjes_wigert(n, argument, q) * envelope


def _hermite_norm(n: int) -> float:
    """1 / sqrt(2^n n!)"""
    return math.exp(-0.5 * (n * math.log(2.0) + special.gammaln(n + 1)))


def psi_x_ho(state, x: float, params: ModelParams) -> float:
    """Oscillator wavefunction (2 lambda/pi)^(1/4) H_n(sqrt(2 lambda) x) e^(-lambda x^2) / sqrt(2^n n!)"""
    n = as_state(state).n
    lam = params.lam
    return ((2.0 * lam / math.pi) ** 0.25 * _hermite_norm(n)
            * hermite(n, math.sqrt(2.0 * lam) * x) * math.exp(-lam * x * x))


def psi_p_ho(state, p: float, params: ModelParams) -> complex:
    """Fourier transform of psi_x_ho, (-i)^n times a Hermite function of p / sqrt(m omega hbar)"""
    n = as_state(state).n
    scale = params.m * params.omega * params.hbar
    value = ((math.pi * scale) ** -0.25 * _hermite_norm(n)
             * hermite(n, p / math.sqrt(scale)) * math.exp(-p * p / (2.0 * scale)))
    return minus_i_power(n) * value
