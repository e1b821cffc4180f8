import itertools
import math

import numpy as np
import pytest

from src.core.errors import DomainError
from src.oscillator.model import make_params
from src.oscillator.wavefunctions import (
    minus_i_power,
    norm_const,
    psi_p,
    psi_p_ho,
    psi_x,
    psi_x_ho,
)
from src.quadrature.oracles import fourier_oracle, overlap_p_oracle, overlap_x_oracle


def test_minus_i_powers_cycle():
    assert [minus_i_power(n) for n in range(5)] == [1, -1j, -1, 1j, 1]


def test_ground_state_normalization_constant():
    assert norm_const(0, make_params(h=1.0)) == pytest.approx(math.pi ** -0.25, rel=1e-15)


def test_first_excited_normalization_constant():
    params = make_params(h=1.0)
    q = params.q
    expected = -1j * math.pi ** -0.25 * math.sqrt(q / (1.0 - q))
    assert abs(norm_const(1, params) - expected) <= 1e-15


def test_normalization_constant_is_singular_without_deformation():
    with pytest.raises(DomainError):
        norm_const(1, make_params())


def test_ground_state_is_gaussian():
    params = make_params(h=1.0)
    for x in (-1.5, 0.0, 0.4):
        assert psi_x(0, x, params) == pytest.approx(math.pi ** -0.25 * math.exp(-0.5 * x * x), rel=1e-15)


def test_second_level_from_explicit_polynomial():
    params = make_params(h=0.8)
    q, lam, h = params.q, params.lam, params.h
    for x in (-0.9, 0.25, 1.3):
        z = -np.exp(-2j * lam * h * x) / math.sqrt(q)
        polynomial = 1.0 + (1.0 + q) * z + z * z
        c2 = -(math.pi ** -0.25) * q / math.sqrt((1.0 - q) * (1.0 - q * q))
        expected = c2 * polynomial * math.exp(-lam * x * x)
        assert abs(psi_x(2, x, params) - expected) <= 1e-14 * max(1.0, abs(expected))


@pytest.mark.parametrize("n", range(5))
def test_position_density_is_even(n):
    params = make_params(h=1.6)
    for x in (0.3, 1.1, 2.7):
        assert abs(psi_x(n, -x, params)) == pytest.approx(abs(psi_x(n, x, params)), rel=1e-12)


# --------------------------
# Oscillator limits
# --------------------------

@pytest.mark.parametrize("n", range(4))
def test_position_wavefunction_approaches_oscillator(n):
    deformed, classical = make_params(h=1e-3), make_params()
    for x in np.linspace(-3.0, 3.0, 13):
        assert abs(psi_x(n, x, deformed) - psi_x_ho(n, x, classical)) < 1e-2


@pytest.mark.parametrize("n", range(4))
def test_momentum_wavefunction_approaches_oscillator(n):
    deformed, classical = make_params(h=1e-3), make_params()
    for p in np.linspace(-3.0, 3.0, 13):
        assert abs(psi_p(n, p, deformed) - psi_p_ho(n, p, classical)) < 1e-2


def test_oscillator_limit_improves_with_smaller_step():
    classical = make_params()
    xs = np.linspace(-3.0, 3.0, 25)

    def deviation(h):
        params = make_params(h=h)
        return max(abs(psi_x(2, x, params) - psi_x_ho(2, x, classical)) for x in xs)

    assert deviation(0.1) > deviation(0.01) > deviation(0.001)


def test_classical_parameters_dispatch_to_oscillator():
    params = make_params()
    assert psi_x(3, 0.7, params) == psi_x_ho(3, 0.7, params)
    assert psi_p(3, 0.7, params) == psi_p_ho(3, 0.7, params)


def test_step_below_rounding_uses_oscillator_form():
    params, classical = make_params(h=1e-8), make_params()
    assert psi_x(1, 0.5, params) == psi_x_ho(1, 0.5, classical)
    assert psi_p(1, 0.5, params) == psi_p_ho(1, 0.5, classical)


def test_oscillator_momentum_phase():
    params = make_params()
    # (-i)^1 times a real odd Hermite function
    value = psi_p_ho(1, 0.5, params)
    assert value.real == 0.0
    assert value.imag < 0.0


# --------------------------
# Quadrature checks
# --------------------------

@pytest.mark.parametrize("n", range(4))
@pytest.mark.parametrize("p", [-6.0, -3.5, -1.2, 0.0, 0.7, 2.0, 4.5, 6.0])
def test_momentum_wavefunction_is_fourier_transform(n, p, reference_params):
    params = reference_params
    assert abs(fourier_oracle(n, p, params) - psi_p(n, p, params)) < 1e-7


@pytest.mark.slow
@pytest.mark.parametrize("h", [0.6, 1.0, 1.6])
def test_position_orthonormality(h):
    params = make_params(h=h)
    for n, m in itertools.product(range(5), repeat=2):
        assert abs(overlap_x_oracle(n, m, params) - (1.0 if n == m else 0.0)) < 1e-7


@pytest.mark.slow
@pytest.mark.parametrize("h", [0.6, 1.0, 1.6])
def test_momentum_orthonormality(h):
    params = make_params(h=h)
    for n, m in itertools.product(range(5), repeat=2):
        assert abs(overlap_p_oracle(n, m, params) - (1.0 if n == m else 0.0)) < 1e-7
