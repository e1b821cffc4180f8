"""
Adaptive quadrature on truncated intervals (scipy QUADPACK).

Complex integrands are integrated component-wise. Two-dimensional integrals
are nested one-dimensional passes, inner over x and outer over p.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, List, Union

from scipy import integrate

from src.core.errors import AccuracyNotReachedError, DomainError

log = logging.getLogger(__name__)

Number = Union[float, complex]


@dataclass(frozen=True)
class IntegrationSpec:
    """Interval, tolerances and subdivision budget of one 1-D pass"""
    lower: float
    upper: float
    abs_tol: float = 1e-11
    rel_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)) or self.lower >= self.upper:
            raise DomainError(f"integration interval needs lower < upper, got [{self.lower}, {self.upper}]")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DomainError("integration tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be a positive integer")

    @classmethod
    def symmetric(cls, half_width: float, center: float = 0.0, **kwargs) -> "IntegrationSpec":
        return cls(center - half_width, center + half_width, **kwargs)

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def with_oscillation(self, frequency: float) -> "IntegrationSpec":
        """More subdivisions for an integrand oscillating like exp(i frequency t)"""
        periods = abs(frequency) * self.length / (2.0 * math.pi)
        return replace(self, max_subdivisions=self.max_subdivisions + 4 * int(math.ceil(periods)))


@dataclass(frozen=True)
class IntegrationResult:
    value: Number
    error: float


def _quad_real(f: Callable[[float], float], spec: IntegrationSpec) -> IntegrationResult:
    result = integrate.quad(
        f,
        spec.lower,
        spec.upper,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=1,
    )
    value, error, info = result[0], result[1], result[2]
    if len(result) > 3:
        # QUADPACK ier: 1 means the subdivision limit was reached
        if info.get("last", 0) >= spec.max_subdivisions:
            raise AccuracyNotReachedError(
                f"quadrature on [{spec.lower:.4g}, {spec.upper:.4g}] hit "
                f"{spec.max_subdivisions} subdivisions (error {error:.2e})",
                value,
                error,
            )
        log.debug(f"quadrature warning on [{spec.lower:.4g}, {spec.upper:.4g}]: {result[3]}")
    return IntegrationResult(value, error)


def integrate_1d(f: Callable[[float], Number], spec: IntegrationSpec,
                 complex_valued: bool = False) -> IntegrationResult:
    """
    Integrate f over [spec.lower, spec.upper].

    Args:
        f: Integrand, real or complex valued
        spec: Interval and accuracy settings
        complex_valued: Integrate real and imaginary parts separately

    Returns:
        IntegrationResult with the estimate and QUADPACK's error bound

    Raises:
        AccuracyNotReachedError: the subdivision budget ran out
    """
    if not complex_valued:
        return _quad_real(f, spec)
    real = _quad_real(lambda t: f(t).real, spec)
    imag = _quad_real(lambda t: f(t).imag, spec)
    return IntegrationResult(complex(real.value, imag.value), math.hypot(real.error, imag.error))


def integrate_2d(f: Callable[[float, float], float], outer: IntegrationSpec,
                 inner: IntegrationSpec) -> IntegrationResult:
    """
    Integrate f(p, x) over outer (p) x inner (x) as nested 1-D passes.

    The reported error adds the outer error and the largest inner error
    times the outer interval length.
    """
    inner_errors: List[float] = []

    def outer_integrand(p: float) -> float:
        partial = _quad_real(lambda x: f(p, x), inner)
        inner_errors.append(partial.error)
        return partial.value

    result = _quad_real(outer_integrand, outer)
    error = result.error + outer.length * max(inner_errors, default=0.0)
    return IntegrationResult(result.value, error)
