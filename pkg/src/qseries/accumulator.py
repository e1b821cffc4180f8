"""
Compensated accumulation for real and complex sums.
Error-free transformation (TwoSum) on each component, Neumaier style.
"""
from typing import Iterable, Tuple


def two_sum(u: float, v: float) -> Tuple[float, float]:
    """Return (s, t) with s = fl(u + v) and u + v = s + t exactly"""
    s = u + v
    up = s - v
    vpp = s - up
    up -= u
    vpp -= v
    return s, -(up + vpp)


class Accumulator:
    """Like math.fsum, but keeps a running complex sum"""

    __slots__ = ("_re", "_re_err", "_im", "_im_err", "abs_sum")

    def __init__(self, value: complex = 0.0):
        value = complex(value)
        self._re, self._re_err = value.real, 0.0
        self._im, self._im_err = value.imag, 0.0
        # sum of |terms|, used for rounding-error estimates
        self.abs_sum = abs(value)

    def add(self, value: complex):
        """Add one term"""
        if isinstance(value, complex):
            re, im = value.real, value.imag
        else:
            re, im = float(value), 0.0
        self._re, err = two_sum(self._re, re)
        self._re_err += err
        if im != 0.0:
            self._im, err = two_sum(self._im, im)
            self._im_err += err
        self.abs_sum += abs(value)

    def extend(self, values: Iterable[complex]):
        for value in values:
            self.add(value)

    @property
    def value(self) -> complex:
        return complex(self._re + self._re_err, self._im + self._im_err)

    @property
    def real(self) -> float:
        return self._re + self._re_err


def compensated_sum(values: Iterable[complex]) -> complex:
    """Sum an iterable with compensated accumulation"""
    acc = Accumulator()
    acc.extend(values)
    return acc.value
