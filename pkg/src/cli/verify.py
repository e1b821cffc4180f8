"""
Self-verification suites.

Each suite yields CheckResult records comparing a closed form with an
independent evaluation. `run_suites` prints one line per check and the CLI
turns any failure into exit code 1.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence

import numpy as np

from src.core.errors import InternalConsistencyError, QDeformError
from src.oscillator.model import ModelParams, energy, make_params
from src.phasespace.husimi import husimi, husimi_ho, husimi_largeh
from src.phasespace.moments import mean_momentum, mean_position
from src.phasespace.wigner import (
    CLOSED_FORMS,
    WignerForm,
    evaluate_form,
    orthogonality_sum,
    wigner_3phi2,
    wigner_dsum,
    wigner_ho,
    wigner_largeh,
)
from src.oscillator.wavefunctions import psi_p
from src.polynomials.families import ASCParams, al_salam_chihara, al_salam_chihara_recurrence
from src.qseries.base import QBase
from src.qseries.pochhammer import q_binomial, q_number, q_pochhammer
from src.qseries.series import SeriesSpec, eval_phi
from src.quadrature.oracles import (
    MomentKind,
    expected_orthogonality_rs,
    expected_orthogonality_sw,
    fourier_oracle,
    husimi_oracle,
    moment_oracle,
    momentum_normalization_factor,
    orthogonality_oracle_rs,
    orthogonality_oracle_sw,
    overlap_p_oracle,
    overlap_x_oracle,
    smoothing_window_factor,
    wigner_oracle_p,
    wigner_oracle_x,
)

log = logging.getLogger(__name__)

REFERENCE_H = (0.6, 1.0, 1.6)


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return math.isfinite(self.deviation) and self.deviation <= self.tolerance

    def line(self) -> str:
        status = "ok" if self.passed else "FAIL"
        text = f"{status} {self.name} deviation={self.deviation:.3e} tolerance={self.tolerance:.1e}"
        return f"{text} ({self.note})" if self.note else text


SUITES: Dict[str, Callable[[], Iterator[CheckResult]]] = {}


def suite(name: str):
    """Register a generator of CheckResult under a suite name"""
    def register(fn):
        SUITES[name] = fn
        return fn
    return register


def _grid(half_width: float, count: int, center_p: float = 0.0) -> List[tuple]:
    axis = np.linspace(-half_width, half_width, count)
    return [(center_p + float(p), float(x)) for p in axis for x in axis]


# ============================================================================
# q-series and polynomials
# ============================================================================

@suite("qseries")
def _qseries_checks() -> Iterator[CheckResult]:
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(20):
        a = complex(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9))
        z = complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6))
        q = float(rng.uniform(0.05, 0.95))
        series = eval_phi(SeriesSpec.make([a], [], q, z))
        product = q_pochhammer(a * z, q) / q_pochhammer(z, q)
        worst = max(worst, abs(series - product) / max(1.0, abs(product)))
    yield CheckResult("qseries.q_binomial_theorem", worst, 1e-12)

    worst = 0.0
    for n, z, q in itertools.product(range(13), (-10.0, -2.5, -0.4, 3j, 0.25 + 0.5j), (0.3, 0.6, 0.9)):
        series = eval_phi(SeriesSpec.make([q ** -n], [], q, z))
        product = q_pochhammer(z * q ** -n, q, n)
        worst = max(worst, abs(series - product) / max(1.0, abs(product)))
    yield CheckResult("qseries.terminating_theorem", worst, 1e-12)

    worst = 0.0
    for n in range(1, 21):
        for k in range(1, n):
            pascal = q_binomial(n - 1, k - 1, 0.7) + 0.7 ** k * q_binomial(n - 1, k, 0.7)
            worst = max(worst, abs(q_binomial(n, k, 0.7) - pascal) / pascal)
    yield CheckResult("qseries.q_pascal", worst, 1e-12)
    yield CheckResult("qseries.q_number", abs(q_number(2.0, 0.5) - 1.5), 1e-15)


@suite("polynomials")
def _polynomial_checks() -> Iterator[CheckResult]:
    alpha = 0.5
    for n, m in itertools.product(range(4), repeat=2):
        expected = expected_orthogonality_rs(n, alpha) if n == m else 0.0
        value = orthogonality_oracle_rs(n, m, alpha)
        yield CheckResult(f"polynomials.rogers_szego.orthogonality[{n},{m}]",
                          abs(value - expected) / max(1.0, expected), 1e-7)
    for n, m in itertools.product(range(4), repeat=2):
        expected = expected_orthogonality_sw(n, alpha) if n == m else 0.0
        value = orthogonality_oracle_sw(n, m, alpha)
        yield CheckResult(f"polynomials.stieltjes_wigert.orthogonality[{n},{m}]",
                          abs(value - expected) / max(1.0, expected), 1e-7)
    worst = 0.0
    for y, a, b, q in ((0.3, 0.2, 0.5, 0.6), (-0.8, 0.05, 1.3, 0.4), (0.0, 0.7, 0.9, 0.8)):
        asc = ASCParams(y, a, b, QBase(q))
        for n in range(7):
            direct = al_salam_chihara(n, asc)
            recurrence = al_salam_chihara_recurrence(n, asc)
            worst = max(worst, abs(direct - recurrence) / max(1.0, abs(recurrence)))
    yield CheckResult("polynomials.al_salam_chihara.recurrence", worst, 1e-10)


# ============================================================================
# Wavefunctions
# ============================================================================

@suite("wavefunctions")
def _wavefunction_checks() -> Iterator[CheckResult]:
    momenta = np.linspace(-6.0, 6.0, 9)
    for h in REFERENCE_H:
        params = make_params(h=h)
        for n, m in itertools.product(range(5), repeat=2):
            expected = 1.0 if n == m else 0.0
            yield CheckResult(f"wavefunctions.orthonormality_x[h={h:g},{n},{m}]",
                              abs(overlap_x_oracle(n, m, params) - expected), 1e-7)
            yield CheckResult(f"wavefunctions.orthonormality_p[h={h:g},{n},{m}]",
                              abs(overlap_p_oracle(n, m, params) - expected), 1e-7)
        for n in range(4):
            worst = max(abs(fourier_oracle(n, float(p), params) - psi_p(n, float(p), params)) for p in momenta)
            yield CheckResult(f"wavefunctions.fourier[h={h:g},{n}]", worst, 1e-7)
        yield CheckResult(f"wavefunctions.momentum_normalization_factor[h={h:g}]",
                          abs(momentum_normalization_factor(2, params) - 1.0), 1e-7)


# ============================================================================
# Distributions
# ============================================================================

@suite("forms")
def _form_checks() -> Iterator[CheckResult]:
    points = _grid(5.0, 21)
    for h, n in itertools.product(REFERENCE_H, range(6)):
        params = make_params(h=h)
        evaluations = {form: [evaluate_form(form, n, point, params) for point in points] for form in CLOSED_FORMS}
        scale = max(abs(e.value) for e in evaluations[WignerForm.DOUBLE_SUM]) or 1.0
        deviation, bound = 0.0, 0.0
        for a, b in itertools.combinations(CLOSED_FORMS, 2):
            for ea, eb in zip(evaluations[a], evaluations[b]):
                deviation = max(deviation, abs(ea.value - eb.value) / scale)
                bound = max(bound, (ea.error_estimate + eb.error_estimate) / scale)
        yield CheckResult(f"forms.agreement[n={n},h={h:g}]", deviation, max(1e-9, bound))


@suite("oracles")
def _oracle_checks() -> Iterator[CheckResult]:
    samples = [(p, x) for p in (-1.1, 0.0, 0.9) for x in (-0.8, 0.0, 0.6)]
    for h, n in itertools.product((0.6, 1.6), range(3)):
        params = make_params(h=h)
        closed = [wigner_dsum(n, point, params) for point in samples]
        oracle_x = [wigner_oracle_x(n, point, params) for point in samples]
        oracle_p = [wigner_oracle_p(n, point, params) for point in samples]
        yield CheckResult(f"oracles.wigner_x[n={n},h={h:g}]",
                          max(abs(a - b) for a, b in zip(closed, oracle_x)), 1e-6)
        yield CheckResult(f"oracles.wigner_p[n={n},h={h:g}]",
                          max(abs(a - b) for a, b in zip(closed, oracle_p)), 1e-6)
        closed_h = [husimi(n, point, params) for point in samples]
        oracle_h = [husimi_oracle(n, point, params) for point in samples]
        yield CheckResult(f"oracles.husimi[n={n},h={h:g}]",
                          max(abs(a - b) for a, b in zip(closed_h, oracle_h)), 1e-6)
    yield CheckResult("oracles.smoothing_window_factor", abs(smoothing_window_factor(make_params()) - 1.0), 1e-7)


@suite("bounds")
def _bound_checks() -> Iterator[CheckResult]:
    points = _grid(5.0, 21)
    for h, n in itertools.product((0.6, 1.0, 1.6, 2.3), range(4)):
        params = make_params(h=h)
        ceiling = 1.0 / (math.pi * params.hbar)
        wigner_values = [wigner_dsum(n, point, params) for point in points]
        yield CheckResult(f"bounds.wigner[n={n},h={h:g}]",
                          max(0.0, max(abs(v) for v in wigner_values) - ceiling), 1e-9)
        husimi_values = [husimi(n, point, params) for point in points]
        yield CheckResult(f"bounds.husimi[n={n},h={h:g}]",
                          max(0.0, -min(husimi_values), max(husimi_values) - ceiling), 1e-9)


@suite("limits")
def _limit_checks() -> Iterator[CheckResult]:
    points = _grid(4.0, 11)
    classical = make_params()
    for n in range(4):
        reference_w = [wigner_ho(n, point, classical) for point in points]
        reference_h = [husimi_ho(n, point, classical) for point in points]
        wigner_devs, husimi_devs = [], []
        for h in (1e-1, 1e-2, 1e-3):
            params = make_params(h=h)
            wigner_devs.append(max(abs(wigner_3phi2(n, pt, params) - r) for pt, r in zip(points, reference_w)))
            husimi_devs.append(max(abs(husimi(n, pt, params) - r) for pt, r in zip(points, reference_h)))
        for label, devs in (("wigner", wigner_devs), ("husimi", husimi_devs)):
            yield CheckResult(f"limits.classical.{label}[n={n}]", devs[-1], 5e-3)
            if n > 0:
                # n = 0 does not depend on h at all
                growth = max(0.0, devs[1] - devs[0], devs[2] - devs[1])
                yield CheckResult(f"limits.classical.{label}.monotone[n={n}]", growth, 0.0)

    ground = [wigner_dsum(0, point, classical) for point in points]
    for h in (0.6, 15.0):
        params = make_params(h=h)
        deviation = max(abs(wigner_dsum(0, pt, params) - g) for pt, g in zip(points, ground))
        yield CheckResult(f"limits.ground_state[h={h:g}]", deviation, 1e-12)

    large = make_params(h=15.0)
    yield CheckResult("limits.pointwise_vanishing", abs(wigner_dsum(1, (0.0, 0.0), large)), 1e-8)
    p_bar = mean_momentum(1, large)
    disk = [(p, x) for p, x in _grid(1.0, 11, center_p=p_bar) if (p - p_bar) ** 2 + x ** 2 <= 1.0]
    for label, closed, approximate in (("wigner", wigner_dsum, wigner_largeh),
                                       ("husimi", husimi, husimi_largeh)):
        exact = [closed(1, pt, large) for pt in disk]
        scale = max(abs(v) for v in exact)
        deviation = max(abs(v - approximate(1, pt, large)) for v, pt in zip(exact, disk)) / scale
        yield CheckResult(f"limits.large_h.{label}", deviation, 0.05)


@suite("moments")
def _moment_checks() -> Iterator[CheckResult]:
    for h, n in itertools.product(REFERENCE_H, range(4)):
        params = make_params(h=h)
        p_mean = moment_oracle(n, params, MomentKind.P)
        x_mean = moment_oracle(n, params, MomentKind.X)
        yield CheckResult(f"moments.p_mean[n={n},h={h:g}]", abs(p_mean - mean_momentum(n, params)), 1e-6)
        yield CheckResult(f"moments.x_mean[n={n},h={h:g}]", abs(x_mean - mean_position(n, params)), 1e-6)


@suite("normalization")
def _normalization_checks() -> Iterator[CheckResult]:
    for h, n in itertools.product((0.6, 1.0, 1.6, 2.3), range(5)):
        params = make_params(h=h)
        for dist in ("wigner", "husimi"):
            total = moment_oracle(n, params, MomentKind.NORM, distribution=dist)
            yield CheckResult(f"normalization.{dist}[n={n},h={h:g}]", abs(total - 1.0), 1e-6)


@suite("trace")
def _trace_checks() -> Iterator[CheckResult]:
    for q in (0.1, 0.5, 0.9):
        worst = max(abs(orthogonality_sum(n, m, q) - (1.0 if n == m else 0.0))
                    for n, m in itertools.product(range(9), repeat=2))
        yield CheckResult(f"trace.sum_identity[q={q:g}]", worst, 1e-12)
    params = make_params(h=1.0)
    unit = 1.0 / (2.0 * math.pi * params.hbar)
    for n, m in itertools.combinations_with_replacement(range(4), 2):
        value = moment_oracle(n, params, MomentKind.TRACE, other=m)
        expected = unit if n == m else 0.0
        yield CheckResult(f"trace.wigner_overlap[{n},{m}]", abs(value - expected), 1e-6 * unit)


@suite("spectrum")
def _spectrum_checks() -> Iterator[CheckResult]:
    classical = make_params()
    worst = max(abs(energy(n, classical).value - (n + 0.5)) for n in range(11))
    yield CheckResult("spectrum.classical", worst, 0.0)
    params = ModelParams.from_q(0.5)
    yield CheckResult("spectrum.q_half[n=1]",
                      abs(energy(1, params).value - 2.0 * (1.0 - 0.5 ** 1.5)), 1e-14)
    worst = max(abs(energy(n, params).value - q_number(n + 0.5, params.q)) for n in range(11))
    yield CheckResult("spectrum.q_number", worst, 0.0)


# ============================================================================
# Runner
# ============================================================================

def _safe(name: str, checks: Callable[[], Iterable[CheckResult]]) -> Iterator[CheckResult]:
    try:
        yield from checks()
    except InternalConsistencyError:
        raise
    except QDeformError as e:
        log.error(f"Suite {name} aborted: {e}")
        yield CheckResult(f"{name}.aborted", math.inf, 0.0, note=type(e).__name__)


def run_suites(names: Optional[Sequence[str]] = None,
               emit: Callable[[str], None] = print) -> List[CheckResult]:
    """
    Run the named suites (all when empty), emitting one line per check.

    Raises:
        KeyError: an unknown suite name
        InternalConsistencyError: a realness or sign invariant broke mid-run
    """
    selected = list(names) if names else list(SUITES)
    unknown = [name for name in selected if name not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    results: List[CheckResult] = []
    for name in selected:
        log.info(f"Running suite {name}")
        for result in _safe(name, SUITES[name]):
            emit(result.line())
            results.append(result)
    failed = sum(not r.passed for r in results)
    log.info(f"{len(results) - failed}/{len(results)} checks passed")
    return results
