import cmath
import math

import mpmath
import numpy as np
import pytest

from src.core.errors import ConvergenceError, DomainError, NumericalRangeError, PoleError
from src.qseries.pochhammer import q_pochhammer
from src.qseries.series import SeriesSpec, eval_phi, eval_phi_log, log_terms, sum_phi


def test_terminating_q_binomial_example():
    spec = SeriesSpec.make([0.5 ** -2], [], 0.5, 0.3)
    assert spec.terminating_degree == 2
    assert eval_phi(spec) == pytest.approx(-0.08, abs=1e-15)


def test_q_binomial_theorem_example():
    a, q, z = 0.4, 0.5, 0.5
    expected = q_pochhammer(a * z, q) / q_pochhammer(z, q)
    assert abs(eval_phi(SeriesSpec.make([a], [], q, z)) - expected) <= 1e-12 * abs(expected)


def test_q_binomial_theorem_random_corpus():
    rng = np.random.default_rng(12345)
    for _ in range(100):
        q = rng.uniform(0.05, 0.95)
        a = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        z = cmath.rect(rng.uniform(0.0, 0.9), rng.uniform(-math.pi, math.pi))
        expected = q_pochhammer(a * z, q) / q_pochhammer(z, q)
        value = eval_phi(SeriesSpec.make([a], [], q, z))
        assert abs(value - expected) <= 1e-11 * max(1.0, abs(expected))


@pytest.mark.parametrize("q", [0.3, 0.6, 0.9])
@pytest.mark.parametrize("z", [-10.0, -2.5, -0.4, 3j, 0.25 + 0.5j])
def test_terminating_q_binomial_theorem(q, z):
    for n in range(13):
        expected = q_pochhammer(z * q ** -n, q, n)
        value = eval_phi(SeriesSpec.make([q ** -n], [], q, z))
        assert abs(value - expected) <= 1e-12 * max(1.0, abs(expected))


def test_unit_numerator_parameter_leaves_first_term():
    spec = SeriesSpec.make([1.0, 0.3, 0.2], [0.5, 0.0], 0.5, 0.5)
    assert spec.terminating_degree == 0
    assert eval_phi(spec) == 1.0


def test_two_phi_one_matches_mpmath():
    value = eval_phi(SeriesSpec.make([0.3, -0.6], [0.45], 0.7, 0.55))
    expected = complex(mpmath.qhyper([0.3, -0.6], [0.45], 0.7, 0.55))
    assert abs(value - expected) <= 1e-12 * abs(expected)


def test_extra_factor_when_r_below_s_plus_one():
    # 0phi1(-; b; q, z) carries ((-1)^k q^C(k,2))^2
    value = eval_phi(SeriesSpec.make([], [0.4], 0.6, 0.8))
    expected = complex(mpmath.qhyper([], [0.4], 0.6, 0.8))
    assert abs(value - expected) <= 1e-12 * abs(expected)


def test_divergent_argument_is_rejected():
    with pytest.raises(ConvergenceError):
        eval_phi(SeriesSpec.make([0.3], [], 0.5, 1.2))


def test_r_above_s_plus_one_is_rejected():
    with pytest.raises(ConvergenceError):
        eval_phi(SeriesSpec.make([0.3, 0.4, 0.5], [0.2], 0.5, 0.1))


def test_terminating_series_ignore_argument_size():
    spec = SeriesSpec.make([0.5 ** -3, 0.3, 0.4], [0.2], 0.5, 50.0)
    assert spec.is_terminating
    assert cmath.isfinite(eval_phi(spec))


def test_pole_before_termination():
    with pytest.raises(PoleError):
        eval_phi(SeriesSpec.make([0.5 ** -3], [0.5 ** -1], 0.5, 0.2))


def test_non_terminating_needs_q_below_one():
    with pytest.raises(DomainError):
        eval_phi(SeriesSpec.make([0.3], [], 1.0, 0.2))


def test_sum_result_carries_term_count():
    result = sum_phi(SeriesSpec.make([0.5 ** -4], [], 0.5, 0.3))
    assert result.terminating
    assert result.n_terms == 5
    assert result.abs_sum >= abs(result.value)


# --------------------------
# Log-magnitude evaluation
# --------------------------

def test_log_evaluation_matches_direct_on_random_corpus():
    rng = np.random.default_rng(7)
    for _ in range(60):
        q = rng.uniform(0.1, 0.9)
        r = int(rng.integers(1, 4))
        numerator = list(rng.uniform(0.0, 1.0, size=r))
        denominator = list(rng.uniform(0.0, 1.0, size=r - 1))
        z = rng.uniform(0.0, 0.9)
        spec = SeriesSpec.make(numerator, denominator, q, z)
        direct = eval_phi(spec)
        logged = eval_phi_log(spec).to_complex()
        assert abs(logged - direct) <= 1e-12 * abs(direct)


def test_log_evaluation_with_dominant_term():
    spec = SeriesSpec.make([0.5 ** -1], [], 0.5, 1e300)
    result = eval_phi_log(spec)
    # 1 - 2e300
    assert result.log_magnitude == pytest.approx(math.log(2.0) + 300.0 * math.log(10.0), rel=1e-14)
    assert abs(result.phase) == pytest.approx(math.pi)


def test_log_evaluation_survives_overflow():
    spec = SeriesSpec.make([0.5 ** -3], [], 0.5, 1e200)
    with pytest.raises(NumericalRangeError):
        eval_phi(spec)
    result = eval_phi_log(spec)
    # (1 - 8z)(1 - 4z)(1 - 2z) ~ -64 z^3
    assert result.log_magnitude == pytest.approx(math.log(64.0) + 600.0 * math.log(10.0), rel=1e-14)
    assert abs(result.phase) == pytest.approx(math.pi)


def test_log_terms_start_with_unit_term():
    terms = log_terms(SeriesSpec.make([0.5 ** -2], [], 0.5, 0.3))
    assert len(terms) == 3
    assert terms[0].log_magnitude == 0.0
