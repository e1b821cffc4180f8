"""
q-shifted factorials, q-binomial coefficients and q-numbers.

All routines accept the base either as a plain float or as a QBase. Finite
products are plain loops; the infinite product stops once the factors are
indistinguishable from one in double precision.
"""
import cmath
import logging
import math
import operator
from typing import Optional, Sequence, Tuple, Union

from src.core.errors import ConvergenceError, DomainError
from src.qseries.accumulator import Accumulator
from src.qseries.base import QLike, as_q
from src.qseries.cache import get_cache
from src.qseries.logcomplex import log_one_minus

log = logging.getLogger(__name__)

# Factors with |a q^k| below this are 1 to double precision
EPS_INF = 1e-17
MAX_INFINITE_FACTORS = 200_000

# q-binomial coefficients come from the Pascal table up to this n
PASCAL_TABLE_MAX = 64

Count = Union[int, float]


def check_count(n, name: str = "n") -> int:
    """Validate a nonnegative integer count"""
    if isinstance(n, bool):
        raise DomainError(f"{name} must be a nonnegative integer, got {n!r}")
    try:
        value = operator.index(n)
    except TypeError:
        if isinstance(n, float) and n.is_integer():
            value = int(n)
        else:
            raise DomainError(f"{name} must be a nonnegative integer, got {n!r}") from None
    if value < 0:
        raise DomainError(f"{name} must be a nonnegative integer, got {n!r}")
    return value


def _infinite_product(a: complex, q: float) -> complex:
    if q >= 1.0:
        raise DomainError("(a;q)_inf requires q < 1")
    product = 1.0
    power = a
    for _ in range(MAX_INFINITE_FACTORS):
        product *= 1.0 - power
        if abs(power) < EPS_INF:
            return product
        power *= q
    raise ConvergenceError(
        f"(a;q)_inf did not settle after {MAX_INFINITE_FACTORS} factors (a={a!r}, q={q!r})"
    )


def q_pochhammer(a: complex, q: QLike, n: Count = math.inf) -> complex:
    """
    q-shifted factorial (a;q)_n = prod_{k=0}^{n-1} (1 - a q^k).

    Args:
        a: Parameter, real or complex
        q: Base in (0, 1]
        n: Nonnegative integer or math.inf

    Returns:
        The product, with the type of a (float stays float)
    """
    qv = as_q(q)
    if n == math.inf:
        return _infinite_product(a, qv)
    n = check_count(n)
    product = 1.0
    power = a
    for _ in range(n):
        product *= 1.0 - power
        power *= qv
    return product


def q_pochhammer_multi(params: Sequence[complex], q: QLike, n: Count = math.inf) -> complex:
    """(a_1, ..., a_m; q)_n as the product of the single symbols"""
    if len(params) == 0:
        raise DomainError("q_pochhammer_multi needs at least one parameter")
    product = 1.0
    for a in params:
        product *= q_pochhammer(a, q, n)
    return product


def log_q_pochhammer(a: complex, q: QLike, n: int) -> complex:
    """
    Complex logarithm of (a;q)_n, summed factor by factor.

    The real part is -inf when one factor vanishes. The imaginary part is the
    sum of the factor phases and is not wrapped.
    """
    qv = as_q(q)
    n = check_count(n)
    if a == 0 or n == 0:
        return 0j
    log_a = cmath.log(a)
    log_q = math.log(qv)
    acc = Accumulator()
    for k in range(n):
        term = log_one_minus(log_a + k * log_q)
        if term.real == -math.inf:
            return complex(-math.inf, 0.0)
        acc.add(term)
    return acc.value


def log_q_factorial(n: int, q: QLike, log_q: Optional[float] = None) -> float:
    """
    log (q;q)_n for 0 < q < 1.

    Pass log_q when it is known exactly (-lambda h^2); near q = 1 the
    logarithm of the rounded q loses most of its digits.
    """
    qv = as_q(q)
    n = check_count(n)
    if log_q is None:
        log_q = math.log(qv)
    if n > 0 and (qv == 1.0 or log_q == 0.0):
        raise DomainError("(q;q)_n vanishes at q = 1")
    return math.fsum(math.log(-math.expm1(j * log_q)) for j in range(1, n + 1))


def _build_pascal_table(q: float) -> Tuple[Tuple[float, ...], ...]:
    rows = [(1.0,)]
    for n in range(1, PASCAL_TABLE_MAX + 1):
        prev = rows[-1]
        row = [1.0] * (n + 1)
        power = 1.0
        for k in range(1, n):
            power *= q
            # [n k] = [n-1 k-1] + q^k [n-1 k]
            row[k] = prev[k - 1] + power * prev[k]
        rows.append(tuple(row))
    log.debug(f"Built q-binomial table for q={q!r} up to n={PASCAL_TABLE_MAX}")
    return tuple(rows)


def q_binomial_row(n: int, q: QLike) -> Tuple[float, ...]:
    """All coefficients [n k]_q for k = 0..n"""
    qv = as_q(q)
    n = check_count(n)
    if qv == 1.0:
        return tuple(float(math.comb(n, k)) for k in range(n + 1))
    if n <= PASCAL_TABLE_MAX:
        table = get_cache().get_or_build(("q_binomial", qv), lambda: _build_pascal_table(qv))
        return table[n]
    return tuple(_q_binomial_log(n, k, qv) for k in range(n + 1))


def _q_binomial_log(n: int, k: int, q: float) -> float:
    return math.exp(log_q_factorial(n, q) - log_q_factorial(k, q) - log_q_factorial(n - k, q))


def q_binomial(n: int, k: int, q: QLike) -> float:
    """
    q-binomial coefficient (q;q)_n / ((q;q)_k (q;q)_{n-k}).

    Raises:
        DomainError: k > n (never silently zero)
    """
    qv = as_q(q)
    n = check_count(n)
    k = check_count(k, "k")
    if k > n:
        raise DomainError(f"q_binomial needs k <= n, got n={n}, k={k}")
    if qv == 1.0:
        return float(math.comb(n, k))
    if n <= PASCAL_TABLE_MAX:
        return q_binomial_row(n, qv)[k]
    return _q_binomial_log(n, k, qv)


def q_number(a: float, q: QLike) -> float:
    """q-number [a]_q = (1 - q^a)/(1 - q), continuous at q = 1"""
    qv = as_q(q)
    if qv == 1.0:
        return float(a)
    log_q = math.log(qv)
    return math.expm1(a * log_q) / math.expm1(log_q)
