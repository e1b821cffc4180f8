import cmath
import math

import pytest

from src.core.errors import AccuracyNotReachedError, DomainError
from src.quadrature.integrate import IntegrationResult, IntegrationSpec, integrate_1d, integrate_2d


def test_constant_on_unit_interval():
    result = integrate_1d(lambda t: 1.0, IntegrationSpec(0.0, 1.0))
    assert result.value == pytest.approx(1.0, abs=1e-14)
    assert result.error >= 0.0


def test_truncated_gaussian():
    result = integrate_1d(lambda t: math.exp(-t * t), IntegrationSpec.symmetric(10.0))
    assert result.value == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_complex_gaussian():
    # int exp(-(1 - i) t^2) dt = sqrt(pi / (1 - i))
    result = integrate_1d(lambda t: cmath.exp(-(1.0 - 1j) * t * t),
                          IntegrationSpec.symmetric(12.0).with_oscillation(12.0), complex_valued=True)
    expected = cmath.sqrt(math.pi / (1.0 - 1j))
    assert abs(result.value - expected) <= 1e-9
    assert abs(expected) == pytest.approx(math.sqrt(math.pi / math.sqrt(2.0)))


def test_two_dimensional_gaussian():
    spec = IntegrationSpec.symmetric(9.0)
    result = integrate_2d(lambda p, x: math.exp(-p * p - x * x), spec, spec)
    assert result.value == pytest.approx(math.pi, rel=1e-10)
    assert result.error < 1e-8


def test_exhausted_subdivisions_keep_estimate():
    spec = IntegrationSpec(0.0, 10.0, max_subdivisions=5)
    with pytest.raises(AccuracyNotReachedError) as info:
        integrate_1d(lambda t: math.sin(1000.0 * t) ** 2, spec)
    assert math.isfinite(info.value.estimate)
    assert info.value.error > 0.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"lower": 1.0, "upper": 1.0},
        {"lower": 0.0, "upper": math.inf},
        {"lower": 0.0, "upper": 1.0, "abs_tol": 0.0},
        {"lower": 0.0, "upper": 1.0, "max_subdivisions": 0},
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(DomainError):
        IntegrationSpec(**kwargs)


def test_symmetric_interval():
    spec = IntegrationSpec.symmetric(2.0, center=1.0)
    assert (spec.lower, spec.upper, spec.length) == (-1.0, 3.0, 4.0)


def test_oscillation_raises_subdivision_budget():
    spec = IntegrationSpec(0.0, 1.0)
    assert spec.with_oscillation(0.0).max_subdivisions == spec.max_subdivisions
    assert spec.with_oscillation(2.0 * math.pi).max_subdivisions == spec.max_subdivisions + 4
    assert spec.with_oscillation(-2.0 * math.pi * 10.0).max_subdivisions >= spec.max_subdivisions + 40


def test_result_is_frozen():
    result = IntegrationResult(1.0, 0.0)
    with pytest.raises(AttributeError):
        result.value = 2.0
