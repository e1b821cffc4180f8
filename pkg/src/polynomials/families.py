"""
Polynomial families of the q-oscillator.

Rogers-Szego and Stieltjes-Wigert polynomials for the wavefunctions,
Al-Salam-Chihara polynomials for the Wigner function, and the classical
Hermite / Laguerre polynomials (scipy) for limits and references.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import special

from src.core.errors import DomainError, NumericalRangeError
from src.qseries.accumulator import Accumulator
from src.qseries.base import QBase, QLike, as_q
from src.qseries.pochhammer import check_count, q_binomial_row, q_pochhammer
from src.qseries.series import SeriesSpec, sum_phi

log = logging.getLogger(__name__)

N_MAX = 64

# Below this |alpha| the Al-Salam-Chihara polynomial is built as a
# polynomial in alpha with the alpha^n division done on coefficients
ASC_SMALL_ALPHA = 0.1


def check_degree(n) -> int:
    """Validate a polynomial degree against N_MAX"""
    n = check_count(n)
    if n > N_MAX:
        raise DomainError(f"degree {n} exceeds n_max = {N_MAX}")
    return n


def _proper_base(q: QLike) -> float:
    qv = as_q(q)
    if qv >= 1.0:
        raise DomainError("q-polynomials need 0 < q < 1")
    return qv


# ============================================================================
# Rogers-Szego / Stieltjes-Wigert
# ============================================================================

def rogers_szego(n: int, x: complex, q: QLike) -> complex:
    """
    Rogers-Szego polynomial H_n(x|q) = sum_k [n k]_q (x / q^(1/2))^k.

    The argument carries the q^(-1/2) scaling used by the position
    wavefunctions.
    """
    n = check_degree(n)
    qv = _proper_base(q)
    row = q_binomial_row(n, qv)
    z = complex(x) / math.sqrt(qv)
    acc = Accumulator()
    power = 1.0 + 0j
    for k in range(n + 1):
        acc.add(row[k] * power)
        power *= z
    return acc.value


def _q_factorials(n: int, q: float) -> List[float]:
    """(q;q)_j for j = 0..n"""
    values = [1.0]
    for j in range(1, n + 1):
        values.append(values[-1] * -math.expm1(j * math.log(q)))
    return values


def stieltjes_wigert(n: int, x: complex, q: QLike) -> complex:
    """Stieltjes-Wigert polynomial S_n(x;q) = sum_k q^(k^2) (-x)^k / ((q;q)_k (q;q)_{n-k})"""
    n = check_degree(n)
    qv = _proper_base(q)
    factorials = _q_factorials(n, qv)
    log_q = math.log(qv)
    acc = Accumulator()
    power = 1.0 + 0j
    for k in range(n + 1):
        acc.add(math.exp(k * k * log_q) * power / (factorials[k] * factorials[n - k]))
        power *= -complex(x)
    return acc.value


# ============================================================================
# Al-Salam-Chihara
# ============================================================================

@dataclass(frozen=True)
class ASCParams:
    """Arguments of Q_n(y; alpha, beta | q) with y = cos(theta)"""
    y: float
    alpha: complex
    beta: complex
    base: QBase

    def __post_init__(self):
        y = float(self.y)
        if not math.isfinite(y) or abs(y) > 1.0 + 1e-12:
            raise DomainError(f"y must lie in [-1, 1], got {self.y!r}")
        object.__setattr__(self, "y", max(-1.0, min(1.0, y)))
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if not isinstance(self.base, QBase):
            object.__setattr__(self, "base", QBase(self.base))

    @property
    def q(self) -> float:
        return self.base.q

    @property
    def unit(self) -> complex:
        """e^(i theta)"""
        return complex(self.y, math.sqrt(max(0.0, 1.0 - self.y * self.y)))


def al_salam_chihara(n: int, params: ASCParams) -> complex:
    """
    Al-Salam-Chihara polynomial

        Q_n(y; a, b | q) = (ab;q)_n / a^n * 3phi2(q^-n, a e^it, a e^-it; ab, 0; q, q)

    Small |a| (including a = 0) goes through the alpha-polynomial form.
    """
    return al_salam_chihara_with_bound(n, params)[0]


def al_salam_chihara_with_bound(n: int, params: ASCParams) -> Tuple[complex, float]:
    """
    Q_n together with the sum of the magnitudes of its summands.

    The magnitude sum times the unit roundoff bounds the rounding error.
    """
    n = check_degree(n)
    q = _proper_base(params.base)
    if n == 0:
        return 1.0 + 0j, 1.0
    if abs(params.alpha) < ASC_SMALL_ALPHA:
        return _asc_alpha_polynomial(n, params)

    alpha, beta = params.alpha, params.beta
    unit = params.unit
    spec = SeriesSpec.make(
        [q ** (-n), alpha * unit, alpha * unit.conjugate()],
        [alpha * beta, 0.0],
        params.base,
        q,
    )
    result = sum_phi(spec)
    prefactor = q_pochhammer(alpha * beta, q, n) / alpha ** n
    if not cmath.isfinite(prefactor):
        raise NumericalRangeError(f"Al-Salam-Chihara prefactor overflows at n={n}, q={q!r}")
    return prefactor * result.value, abs(prefactor) * result.abs_sum


def _pochhammer_in_alpha(c: complex, q: float, start: int, stop: int) -> np.ndarray:
    """Coefficients in alpha of prod_{j=start}^{stop-1} (1 - c q^j alpha)"""
    coeffs = np.array([1.0 + 0j])
    for j in range(start, stop):
        coeffs = P.polymul(coeffs, np.array([1.0, -c * q ** j], dtype=complex))
    return coeffs


def _asc_alpha_polynomial(n: int, params: ASCParams) -> Tuple[complex, float]:
    """
    Q_n expanded as a polynomial in alpha with beta fixed.

    Q_n = alpha^-n sum_k c_k (alpha e^it;q)_k (alpha e^-it;q)_k (alpha beta q^k;q)_{n-k}
    with c_k = (q^-n;q)_k q^k / (q;q)_k. The coefficients of alpha^0..alpha^(n-1)
    cancel exactly, so only alpha^n..alpha^2n are kept.
    """
    q = params.q
    unit = params.unit
    beta = params.beta
    row = q_binomial_row(n, q)
    log_q = math.log(q)
    total = np.zeros(2 * n + 1, dtype=complex)
    magnitude = np.zeros(2 * n + 1)
    for k in range(n + 1):
        # (q^-n;q)_k / (q;q)_k = (-1)^k [n k] q^(C(k,2) - nk)
        exponent = (k * (k - 1) // 2 - n * k + k) * log_q
        if exponent > 700.0:
            raise NumericalRangeError(f"Al-Salam-Chihara coefficient overflows at n={n}, q={q!r}")
        c_k = (-1) ** k * row[k] * math.exp(exponent)
        term = P.polymul(
            P.polymul(_pochhammer_in_alpha(unit, q, 0, k), _pochhammer_in_alpha(unit.conjugate(), q, 0, k)),
            _pochhammer_in_alpha(beta, q, k, n),
        ) * c_k
        total[: len(term)] += term
        magnitude[: len(term)] += np.abs(term)
    kept = total[n:]
    alpha = params.alpha
    value = complex(P.polyval(alpha, kept))
    bound = float(P.polyval(abs(alpha), magnitude[n:]))
    return value, bound


def al_salam_chihara_recurrence(n: int, params: ASCParams) -> complex:
    """
    Q_n from the three-term recurrence

        Q_{k+1} = (2y - (a+b) q^k) Q_k - (1 - q^k)(1 - ab q^(k-1)) Q_{k-1}

    with Q_0 = 1, Q_1 = 2y - a - b.
    """
    n = check_degree(n)
    q = _proper_base(params.base)
    a, b, y = params.alpha, params.beta, params.y
    prev, curr = 0j, 1.0 + 0j
    power = 1.0  # q^k
    for k in range(n):
        nxt = (2.0 * y - (a + b) * power) * curr
        if k > 0:
            nxt -= (1.0 - power) * (1.0 - a * b * power / q) * prev
        prev, curr = curr, nxt
        power *= q
    return curr


# ============================================================================
# Classical families
# ============================================================================

def hermite(n: int, x: float) -> float:
    """Physicists' Hermite polynomial H_n(x)"""
    n = check_count(n)
    return float(special.eval_hermite(n, x))


def laguerre(n: int, x: float) -> float:
    """Laguerre polynomial L_n(x)"""
    n = check_count(n)
    return float(special.eval_laguerre(n, x))
