import itertools
import math

import pytest

from src.cli.verify import REFERENCE_H, CheckResult, run_suites


def _collect(names):
    lines = []
    results = run_suites(names, emit=lines.append)
    return {r.name: r for r in results}, lines


def test_check_result_line():
    assert CheckResult("a.b", 1e-13, 1e-12).line().startswith("ok a.b")
    assert not CheckResult("a.b", math.inf, 0.0).passed
    assert CheckResult("a.b", 2.0, 1.0, note="x").line().endswith("(x)")


def test_qseries_suite_uses_tight_tolerances():
    results, lines = _collect(["qseries"])
    assert len(lines) == len(results)
    assert results["qseries.terminating_theorem"].tolerance == 1e-12
    assert results["qseries.q_pascal"].tolerance == 1e-12
    assert all(r.passed for r in results.values())


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suites(["nonsense"])


@pytest.mark.slow
def test_moments_suite_covers_reference_steps():
    results, _ = _collect(["moments"])
    for h, n in itertools.product(REFERENCE_H, range(4)):
        assert results[f"moments.p_mean[n={n},h={h:g}]"].passed
        assert results[f"moments.x_mean[n={n},h={h:g}]"].passed


@pytest.mark.slow
def test_normalization_suite_covers_every_level():
    results, _ = _collect(["normalization"])
    for h, n, dist in itertools.product((0.6, 1.0, 1.6, 2.3), range(5), ("wigner", "husimi")):
        assert results[f"normalization.{dist}[n={n},h={h:g}]"].passed


@pytest.mark.slow
def test_wavefunction_suite_covers_reference_steps():
    results, _ = _collect(["wavefunctions"])
    for h in REFERENCE_H:
        assert results[f"wavefunctions.orthonormality_p[h={h:g},4,4]"].passed
        assert results[f"wavefunctions.fourier[h={h:g},3]"].passed
