"""
Integral-definition oracles.

Each oracle evaluates a quantity from its defining integral over the
wavefunctions (or over a closed-form distribution for moments) so that the
closed forms can be checked against something computed a different way.
Truncation boxes come from the Gaussian envelopes:

    Wigner kernel x'   |x'| <= sqrt(160 / lambda)       (lambda x'^2 / 4 >= 40)
    phase-space x      |x|  <= sqrt(40 / lambda)
    phase-space p      |p|  <= sqrt(80 lambda hbar^2) + n m w h

Every oracle takes box_scale to stretch its boxes and full_output to return
the IntegrationResult instead of the bare value.
"""
import cmath
import logging
import math
from enum import Enum
from typing import Callable, Optional

from src.core.errors import DomainError
from src.oscillator.model import ModelParams, as_state
from src.oscillator.wavefunctions import psi_p, psi_x
from src.phasespace.husimi import husimi, husimi_ho
from src.phasespace.wigner import WignerForm, as_point, evaluate_form, wigner_ho
from src.polynomials.families import rogers_szego, stieltjes_wigert
from src.qseries.pochhammer import log_q_factorial
from src.quadrature.integrate import IntegrationResult, IntegrationSpec, integrate_1d, integrate_2d

log = logging.getLogger(__name__)

# Wigner oracles are compared at 1e-6; keep the quadrature well below that
KERNEL_ABS_TOL = 1e-11
KERNEL_REL_TOL = 1e-10
PLANE_ABS_TOL = 1e-10
PLANE_REL_TOL = 1e-10


class MomentKind(Enum):
    NORM = "norm"
    X = "x"
    P = "p"
    TRACE = "trace"


def _result(result: IntegrationResult, full_output: bool):
    return result if full_output else result.value


def x_half_width(params: ModelParams, box_scale: float = 1.0) -> float:
    return box_scale * math.sqrt(40.0 / params.lam)


def p_half_width(n: int, params: ModelParams, box_scale: float = 1.0) -> float:
    return box_scale * (math.sqrt(80.0 * params.lam) * params.hbar + n * params.m * params.omega * params.h)


def kernel_half_width(params: ModelParams, box_scale: float = 1.0) -> float:
    return box_scale * math.sqrt(160.0 / params.lam)


# ============================================================================
# Wigner / Husimi from their definitions
# ============================================================================

def wigner_oracle_x(state, point, params: ModelParams, box_scale: float = 1.0, full_output: bool = False):
    """
    (1/2 pi hbar) int psi*(x - x'/2) psi(x + x'/2) exp(-i p x'/hbar) dx'

    The integrand at -x' is the conjugate of the one at x', so only the real
    part is integrated.
    """
    n = as_state(state).n
    point = as_point(point)
    p, x, hbar = point.p, point.x, params.hbar

    def integrand(t: float) -> float:
        value = (psi_x(n, x - 0.5 * t, params).conjugate() * psi_x(n, x + 0.5 * t, params)
                 * cmath.exp(-1j * p * t / hbar))
        return value.real

    spec = IntegrationSpec.symmetric(kernel_half_width(params, box_scale),
                                     abs_tol=KERNEL_ABS_TOL, rel_tol=KERNEL_REL_TOL).with_oscillation(p / hbar)
    result = integrate_1d(integrand, spec)
    scale = 1.0 / (2.0 * math.pi * hbar)
    return _result(IntegrationResult(scale * result.value, scale * result.error), full_output)


def wigner_oracle_p(state, point, params: ModelParams, box_scale: float = 1.0, full_output: bool = False):
    """(1/2 pi hbar) int psi~*(p - p'/2) psi~(p + p'/2) exp(i x p'/hbar) dp'"""
    n = as_state(state).n
    point = as_point(point)
    p, x, hbar = point.p, point.x, params.hbar

    def integrand(t: float) -> float:
        value = (psi_p(n, p - 0.5 * t, params).conjugate() * psi_p(n, p + 0.5 * t, params)
                 * cmath.exp(1j * x * t / hbar))
        return value.real

    half_width = box_scale * (math.sqrt(320.0 * params.lam) * hbar + 2.0 * n * params.m * params.omega * params.h)
    spec = IntegrationSpec.symmetric(half_width, abs_tol=KERNEL_ABS_TOL,
                                     rel_tol=KERNEL_REL_TOL).with_oscillation(x / hbar)
    result = integrate_1d(integrand, spec)
    scale = 1.0 / (2.0 * math.pi * hbar)
    return _result(IntegrationResult(scale * result.value, scale * result.error), full_output)


def husimi_oracle(state, point, params: ModelParams, box_scale: float = 1.0, full_output: bool = False):
    """
    (1 / ((2 pi)^(3/2) hbar dx)) |int psi(x') exp(-i p x'/hbar - (x - x')^2 / 4 dx^2) dx'|^2
    with dx^2 = hbar / (2 m w).
    """
    n = as_state(state).n
    point = as_point(point)
    p, x, hbar = point.p, point.x, params.hbar
    delta_x = math.sqrt(hbar / (2.0 * params.m * params.omega))

    def integrand(t: float) -> complex:
        return psi_x(n, t, params) * cmath.exp(-1j * p * t / hbar - (x - t) ** 2 / (4.0 * delta_x ** 2))

    half_width = x_half_width(params, box_scale)
    spec = IntegrationSpec(min(-half_width, x - half_width), max(half_width, x + half_width),
                           abs_tol=KERNEL_ABS_TOL, rel_tol=KERNEL_REL_TOL).with_oscillation(p / hbar)
    amplitude = integrate_1d(integrand, spec, complex_valued=True)
    scale = 1.0 / ((2.0 * math.pi) ** 1.5 * hbar * delta_x)
    value = scale * abs(amplitude.value) ** 2
    error = scale * 2.0 * abs(amplitude.value) * amplitude.error
    return _result(IntegrationResult(value, error), full_output)


def smoothed_wigner_oracle(state, point, params: ModelParams, box_scale: float = 1.0,
                           full_output: bool = False):
    """
    Gaussian smoothing of the Wigner function at the Husimi resolution,

        (1/pi hbar) int int exp(-p'^2/2dp^2 - x'^2/2dx^2) W(p + p', x + x') dp' dx'

    with dx^2 = hbar/(2 m w) and dp^2 = m w hbar / 2.
    """
    n = as_state(state).n
    point = as_point(point)
    hbar = params.hbar
    delta_x2 = hbar / (2.0 * params.m * params.omega)
    delta_p2 = params.m * params.omega * hbar / 2.0

    def integrand(dp: float, dx: float) -> float:
        window = math.exp(-dp * dp / (2.0 * delta_p2) - dx * dx / (2.0 * delta_x2))
        return window * evaluate_form(WignerForm.DOUBLE_SUM, n, (point.p + dp, point.x + dx), params).value

    outer = IntegrationSpec.symmetric(box_scale * 8.0 * math.sqrt(delta_p2),
                                      abs_tol=PLANE_ABS_TOL, rel_tol=PLANE_REL_TOL)
    inner = IntegrationSpec.symmetric(box_scale * 8.0 * math.sqrt(delta_x2),
                                      abs_tol=PLANE_ABS_TOL, rel_tol=PLANE_REL_TOL)
    result = integrate_2d(integrand, outer, inner)
    scale = 1.0 / (math.pi * hbar)
    return _result(IntegrationResult(scale * result.value, scale * result.error), full_output)


def smoothing_window_factor(params: ModelParams) -> float:
    """
    Ratio of the Husimi closed form to the smoothed Wigner oracle for the
    ground state at the origin. 1 when the smoothing window is normalized.
    """
    classical = ModelParams(params.m, params.omega, params.hbar, 0.0)
    factor = husimi_ho(0, (0.0, 0.0), classical) / smoothed_wigner_oracle(0, (0.0, 0.0), classical)
    log.info(f"Smoothing window normalization factor: {factor:.12f}")
    return factor


# ============================================================================
# Wavefunction oracles
# ============================================================================

def fourier_oracle(state, p: float, params: ModelParams, box_scale: float = 1.0, full_output: bool = False):
    """(1/sqrt(2 pi hbar)) int psi(x) exp(-i x p / hbar) dx"""
    n = as_state(state).n
    hbar = params.hbar
    spec = IntegrationSpec.symmetric(x_half_width(params, box_scale), abs_tol=KERNEL_ABS_TOL,
                                     rel_tol=KERNEL_REL_TOL).with_oscillation(p / hbar)
    result = integrate_1d(lambda t: psi_x(n, t, params) * cmath.exp(-1j * t * p / hbar), spec,
                          complex_valued=True)
    scale = 1.0 / math.sqrt(2.0 * math.pi * hbar)
    return _result(IntegrationResult(scale * result.value, scale * result.error), full_output)


def overlap_x_oracle(n: int, m: int, params: ModelParams, box_scale: float = 1.0, full_output: bool = False):
    """int psi_n*(x) psi_m(x) dx"""
    spec = IntegrationSpec.symmetric(x_half_width(params, box_scale), abs_tol=1e-12, rel_tol=1e-11)
    result = integrate_1d(lambda t: psi_x(n, t, params).conjugate() * psi_x(m, t, params), spec,
                          complex_valued=True)
    return _result(result, full_output)


def overlap_p_oracle(n: int, m: int, params: ModelParams, box_scale: float = 1.0, full_output: bool = False):
    """int psi~_n*(p) psi~_m(p) dp"""
    half_width = p_half_width(max(n, m), params, box_scale)
    spec = IntegrationSpec.symmetric(half_width, abs_tol=1e-12, rel_tol=1e-11)
    result = integrate_1d(lambda t: psi_p(n, t, params).conjugate() * psi_p(m, t, params), spec,
                          complex_valued=True)
    return _result(result, full_output)


def momentum_normalization_factor(state, params: ModelParams) -> float:
    """1 / sqrt(int |psi~_n|^2 dp); 1 when the momentum prefactor is right"""
    n = as_state(state).n
    norm = overlap_p_oracle(n, n, params).real
    factor = 1.0 / math.sqrt(norm)
    log.info(f"Momentum normalization factor for n={n}, h={params.h:g}: {factor:.12f}")
    return factor


def _check_alpha(alpha: float) -> float:
    if not alpha > 0 or not math.isfinite(alpha):
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    return math.exp(-2.0 * alpha * alpha)


def orthogonality_oracle_rs(n: int, m: int, alpha: float, full_output: bool = False):
    """
    (1/sqrt(pi)) int H_n(-e^(-2i alpha y) | q) H_m(-e^(2i alpha y) | q) e^(-y^2) dy, q = e^(-2 alpha^2)

    Expected value (q;q)_n / q^n on the diagonal, 0 off it.
    """
    q = _check_alpha(alpha)

    def integrand(y: float) -> complex:
        unit = cmath.exp(-2j * alpha * y)
        return rogers_szego(n, -unit, q) * rogers_szego(m, -unit.conjugate(), q) * math.exp(-y * y)

    spec = IntegrationSpec.symmetric(9.0, abs_tol=1e-12, rel_tol=1e-11).with_oscillation(2.0 * alpha * (n + m))
    result = integrate_1d(integrand, spec, complex_valued=True)
    scale = 1.0 / math.sqrt(math.pi)
    value = scale * result.value.real
    return _result(IntegrationResult(value, scale * result.error), full_output)


def orthogonality_oracle_sw(n: int, m: int, alpha: float, full_output: bool = False):
    """
    (1/sqrt(pi)) int S_n(q^(-1/2) e^(-2 alpha y); q) S_m(q^(-1/2) e^(-2 alpha y); q) e^(-y^2) dy

    Expected value 1 / ((q;q)_n q^n) on the diagonal, 0 off it.
    """
    q = _check_alpha(alpha)
    shift = -0.5 * math.log(q)

    def integrand(y: float) -> float:
        argument = math.exp(shift - 2.0 * alpha * y)
        return (stieltjes_wigert(n, argument, q) * stieltjes_wigert(m, argument, q)).real * math.exp(-y * y)

    # the polynomial growth moves the weight towards y = -alpha (n + m)
    spec = IntegrationSpec(-alpha * (n + m) - 9.0, 9.0, abs_tol=1e-12, rel_tol=1e-11)
    result = integrate_1d(integrand, spec)
    scale = 1.0 / math.sqrt(math.pi)
    return _result(IntegrationResult(scale * result.value, scale * result.error), full_output)


def expected_orthogonality_rs(n: int, alpha: float) -> float:
    q = _check_alpha(alpha)
    return math.exp(log_q_factorial(n, q) - n * math.log(q))


def expected_orthogonality_sw(n: int, alpha: float) -> float:
    q = _check_alpha(alpha)
    return math.exp(-log_q_factorial(n, q) - n * math.log(q))


# ============================================================================
# Phase-space moments
# ============================================================================

def _distribution(kind: str, n: int, params: ModelParams) -> Callable[[float, float], float]:
    if kind == "wigner":
        if params.is_classical:
            return lambda p, x: wigner_ho(n, (p, x), params)
        return lambda p, x: evaluate_form(WignerForm.DOUBLE_SUM, n, (p, x), params).value
    if kind == "husimi":
        return lambda p, x: husimi(n, (p, x), params)
    raise DomainError(f"unknown distribution {kind!r}")


def phase_space_box(n: int, params: ModelParams, distribution: str = "wigner",
                    box_scale: float = 1.0):
    """Outer (p) and inner (x) integration specs for a distribution of state n"""
    # the Husimi function is twice as wide in variance
    widen = math.sqrt(2.0) if distribution == "husimi" else 1.0
    p_half = box_scale * (widen * math.sqrt(80.0 * params.lam) * params.hbar
                          + n * params.m * params.omega * params.h)
    x_half = widen * x_half_width(params, box_scale)
    outer = IntegrationSpec.symmetric(p_half, abs_tol=PLANE_ABS_TOL, rel_tol=PLANE_REL_TOL)
    inner = IntegrationSpec.symmetric(x_half, abs_tol=PLANE_ABS_TOL, rel_tol=PLANE_REL_TOL)
    return outer, inner


def moment_oracle(state, params: ModelParams, which=MomentKind.NORM, other: Optional[int] = None,
                  distribution: str = "wigner", box_scale: float = 1.0, full_output: bool = False):
    """
    2-D quadrature of f(p, x) W(p, x) over the envelope box.

    Args:
        which: MomentKind (or its value): norm, x, p, or trace with W_other
        other: Second photon number for the trace
        distribution: "wigner" or "husimi"
    """
    n = as_state(state).n
    which = MomentKind(which)
    density = _distribution(distribution, n, params)
    if which is MomentKind.NORM:
        integrand = density
    elif which is MomentKind.X:
        integrand = lambda p, x: x * density(p, x)
    elif which is MomentKind.P:
        integrand = lambda p, x: p * density(p, x)
    else:
        if other is None:
            raise DomainError("the trace moment needs the second photon number")
        partner = _distribution(distribution, as_state(other).n, params)
        integrand = lambda p, x: density(p, x) * partner(p, x)
    box_n = n if other is None else max(n, other)
    outer, inner = phase_space_box(box_n, params, distribution, box_scale)
    return _result(integrate_2d(integrand, outer, inner), full_output)


def marginal_x_oracle(state, x: float, params: ModelParams, box_scale: float = 1.0,
                      full_output: bool = False):
    """int W(p, x) dp, to be compared with |psi_n(x)|^2"""
    n = as_state(state).n
    density = _distribution("wigner", n, params)
    outer, _ = phase_space_box(n, params, "wigner", box_scale)
    return _result(integrate_1d(lambda p: density(p, x), outer), full_output)


def marginal_p_oracle(state, p: float, params: ModelParams, box_scale: float = 1.0,
                      full_output: bool = False):
    """int W(p, x) dx, to be compared with |psi~_n(p)|^2"""
    n = as_state(state).n
    density = _distribution("wigner", n, params)
    _, inner = phase_space_box(n, params, "wigner", box_scale)
    return _result(integrate_1d(lambda x: density(p, x), inner), full_output)
