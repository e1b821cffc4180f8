import itertools
import logging
import math

import numpy as np
import pytest

from src.core.errors import DomainError, NumericalRangeError
from src.oscillator.model import make_params
from src.phasespace import wigner as wigner_module
from src.phasespace.wigner import (
    CLOSED_FORMS,
    DeformedArgument,
    PhasePoint,
    WignerForm,
    evaluate_form,
    orthogonality_sum,
    wigner,
    wigner_3phi2,
    wigner_asc,
    wigner_dsum,
    wigner_ho,
    wigner_largeh,
    wigner_ssum,
)

INV_PI = 1.0 / math.pi
AXIS = np.linspace(-5.0, 5.0, 21)

# (h, largest n) where the public forms must agree to 1e-9 of the grid maximum
WELL_CONDITIONED = [(0.6, 5), (1.0, 5), (1.6, 5)]


# --------------------------
# Points and arguments
# --------------------------

@pytest.mark.parametrize("p, x", [(math.nan, 0.0), (0.0, math.inf)])
def test_phase_point_must_be_finite(p, x):
    with pytest.raises(DomainError):
        PhasePoint(p, x)


def test_deformed_argument():
    params = make_params(h=0.5)
    a = DeformedArgument.at(PhasePoint(-2.0, 1.0), params).a
    assert a == pytest.approx(complex(-1.0, 0.5))
    assert DeformedArgument.at(PhasePoint(0.0, 0.0), params).a == 0


# --------------------------
# Single values
# --------------------------

@pytest.mark.parametrize("form", CLOSED_FORMS)
@pytest.mark.parametrize("h", [0.6, 1.0, 15.0])
def test_ground_state_at_origin(form, h):
    value = evaluate_form(form, 0, (0.0, 0.0), make_params(h=h)).value
    assert value == pytest.approx(INV_PI, rel=1e-12)


@pytest.mark.parametrize("h", [0.6, 15.0])
def test_ground_state_does_not_depend_on_deformation(h, classical):
    for p, x in [(0.5, -0.3), (-1.2, 0.8)]:
        assert wigner_dsum(0, (p, x), make_params(h=h)) == pytest.approx(
            wigner_ho(0, (p, x), classical), rel=1e-12)


def test_oscillator_values_at_origin(classical):
    assert wigner_ho(0, (0.0, 0.0), classical) == pytest.approx(INV_PI)
    assert wigner_ho(1, (0.0, 0.0), classical) == pytest.approx(-INV_PI)
    assert wigner_3phi2(1, (0.0, 0.0), classical) == pytest.approx(-INV_PI)


def test_forms_at_documented_points():
    assert wigner_3phi2(2, (0.5, -0.5), make_params(h=0.6)) == pytest.approx(
        wigner_dsum(2, (0.5, -0.5), make_params(h=0.6)), abs=1e-10 * INV_PI)
    assert wigner_asc(1, (0.0, 1.0), make_params(h=1.0)) == pytest.approx(
        wigner_dsum(1, (0.0, 1.0), make_params(h=1.0)), abs=1e-10 * INV_PI)
    assert wigner_asc(2, (-3.2, 0.0), make_params(h=1.6)) == pytest.approx(
        wigner_dsum(2, (-3.2, 0.0), make_params(h=1.6)), abs=1e-9 * INV_PI)


def test_double_sum_matches_integral_definition():
    params = make_params(h=1.0)
    closed = wigner_dsum(1, (-1.0, 0.0), params)
    assert wigner(1, (-1.0, 0.0), params, WignerForm.INTEGRAL_ORACLE) == pytest.approx(closed, abs=1e-6)


def test_integral_definition_is_not_a_closed_form():
    with pytest.raises(DomainError):
        evaluate_form(WignerForm.INTEGRAL_ORACLE, 1, (0.0, 0.0), make_params(h=1.0))


# --------------------------
# Cross-form agreement
# --------------------------

def _grid_values(function, n, params):
    return np.array([[function(n, (p, x), params) for x in AXIS] for p in AXIS])


@pytest.mark.parametrize("h, n_max", WELL_CONDITIONED)
def test_closed_forms_agree(h, n_max):
    params = make_params(h=h)
    for n in range(n_max + 1):
        reference = _grid_values(wigner_dsum, n, params)
        scale = np.max(np.abs(reference))
        for function in (wigner_ssum, wigner_3phi2, wigner_asc):
            assert np.max(np.abs(_grid_values(function, n, params) - reference)) <= 1e-9 * scale


def test_closed_forms_agree_within_error_estimates(reference_params):
    params = reference_params
    for n in range(6):
        for p, x in itertools.product(AXIS[::2], AXIS[::2]):
            evaluations = [evaluate_form(form, n, (p, x), params) for form in CLOSED_FORMS]
            for first, second in itertools.combinations(evaluations, 2):
                allowed = max(1e-9 * INV_PI, 4.0 * (first.error_estimate + second.error_estimate))
                assert abs(first.value - second.value) <= allowed


def test_public_form_respects_fallback_tolerance():
    params = make_params(h=1.6)
    threshold = wigner_module.FALLBACK_TOLERANCE / math.pi
    reference = _grid_values(wigner_dsum, 5, params)
    public = _grid_values(wigner_3phi2, 5, params)
    assert np.max(np.abs(public - reference)) <= 1e-9 * np.max(np.abs(reference))
    for p, x in itertools.product(AXIS[::4], AXIS[::4]):
        assert evaluate_form(WignerForm.HYPER_3PHI2, 5, (p, x), params).error_estimate <= threshold


def test_double_sum_log_path_matches_direct(monkeypatch):
    params = make_params(h=1.0)
    points = [(-1.5, 0.3), (0.0, 0.0), (2.0, -1.0), (-3.0, 0.5)]
    direct = [wigner_dsum(3, point, params) for point in points]
    monkeypatch.setattr(wigner_module, "LOG_PATH_THRESHOLD", 0.0)
    logged = [wigner_dsum(3, point, params) for point in points]
    assert np.allclose(logged, direct, rtol=0.0, atol=1e-12 * INV_PI)


# --------------------------
# Properties
# --------------------------

@pytest.mark.parametrize("h", [0.6, 1.0, 1.6, 2.3])
def test_wigner_is_bounded(h):
    params = make_params(h=h)
    for n in range(4):
        values = _grid_values(wigner_dsum, n, params)
        assert np.max(np.abs(values)) <= INV_PI + 1e-9


def test_excited_state_vanishes_pointwise_for_large_step():
    assert abs(wigner_dsum(1, (0.0, 0.0), make_params(h=15.0))) <= 1e-8


def test_peak_moves_to_negative_momentum():
    params = make_params(h=0.6)
    assert wigner_dsum(1, (-1.4, 0.0), params) > wigner_dsum(1, (1.4, 0.0), params)
    assert wigner_dsum(1, (-1.4, 0.0), params) > 0.0


def test_classical_limit_improves_with_smaller_step(classical):
    axis = np.linspace(-3.0, 3.0, 13)

    def deviation(h):
        params = make_params(h=h)
        return max(abs(wigner_3phi2(1, (p, x), params) - wigner_ho(1, (p, x), classical))
                   for p in axis for x in axis)

    deviations = [deviation(h) for h in (1e-1, 1e-2, 1e-3)]
    assert deviations[0] > deviations[1] > deviations[2]
    assert deviations[2] <= 10.0 * 1e-3


def test_small_step_double_sum_near_oscillator(classical):
    params = make_params(h=1e-3)
    for p, x in [(0.0, 0.0), (0.7, -0.4), (-1.5, 1.0)]:
        assert wigner_dsum(1, (p, x), params) == pytest.approx(wigner_ho(1, (p, x), classical), abs=1e-2)


@pytest.mark.parametrize("form", CLOSED_FORMS)
def test_step_below_rounding_uses_oscillator_form(form, classical):
    params = make_params(h=1e-8)
    for point in [(0.5, 0.5), (-1.2, 0.0), (2.0, -0.7)]:
        assert wigner(1, point, params, form) == wigner_ho(1, point, classical)


def test_large_step_gaussian_peak():
    params = make_params(h=1.0)
    peak = wigner_largeh(1, (-1.0, 0.0), params)
    assert peak == pytest.approx(INV_PI)
    for p, x in [(-0.9, 0.0), (-1.0, 0.1), (0.0, 0.0)]:
        assert wigner_largeh(1, (p, x), params) < peak


def test_large_step_approximation_near_displaced_peak():
    params = make_params(h=15.0)
    center = -15.0
    for radius, angle in itertools.product((0.0, 0.5, 1.0), np.linspace(0.0, 2.0 * math.pi, 8)):
        point = (center + radius * math.cos(angle), radius * math.sin(angle))
        assert abs(wigner_dsum(1, point, params) - wigner_largeh(1, point, params)) <= 0.05 * INV_PI


# --------------------------
# Fallback between forms
# --------------------------

def test_overflowing_form_falls_back_with_single_notice(monkeypatch, caplog):
    monkeypatch.setattr(wigner_module, "_fallback_notices", set())
    params = make_params(h=15.0)
    with caplog.at_level(logging.INFO, logger="src.phasespace.wigner"):
        first = evaluate_form(WignerForm.HYPER_3PHI2, 10, (0.0, 0.0), params)
        second = evaluate_form(WignerForm.HYPER_3PHI2, 10, (0.5, 0.0), params)
    assert first.form is WignerForm.DOUBLE_SUM
    assert first.fallback_from is WignerForm.HYPER_3PHI2
    assert second.form is WignerForm.DOUBLE_SUM
    notices = [r for r in caplog.records if "hyper -> dsum" in r.getMessage()]
    assert len(notices) == 1


def test_fallback_can_be_disabled():
    with pytest.raises(NumericalRangeError):
        evaluate_form(WignerForm.HYPER_3PHI2, 10, (0.0, 0.0), make_params(h=15.0), allow_fallback=False)


def test_fallback_value_matches_reference():
    params = make_params(h=15.0)
    point = (-150.0, 0.0)
    assert wigner_3phi2(10, point, params) == wigner_dsum(10, point, params)


# --------------------------
# Trace identity
# --------------------------

@pytest.mark.parametrize("n, m, q, expected", [(0, 0, 0.5, 1.0), (2, 2, 0.3, 1.0), (1, 3, 0.7, 0.0)])
def test_orthogonality_sum_examples(n, m, q, expected):
    assert orthogonality_sum(n, m, q) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("q", [0.1, 0.5, 0.9])
def test_orthogonality_sum_is_kronecker_delta(q):
    for n, m in itertools.product(range(9), repeat=2):
        assert orthogonality_sum(n, m, q) == pytest.approx(1.0 if n == m else 0.0, abs=1e-12)


@pytest.mark.parametrize("n, m, q", [(33, 0, 0.5), (1, 1, 1.0)])
def test_orthogonality_sum_limits(n, m, q):
    with pytest.raises(DomainError):
        orthogonality_sum(n, m, q)
