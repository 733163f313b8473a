"""Compensated complex accumulation and the deterministic summation order."""
from typing import Iterator


def two_sum(u: float, v: float):
    """Error-free transformation: u + v = s + t exactly."""
    s = u + v
    up = s - v
    vpp = s - up
    up -= u
    vpp -= v
    return s, -(up + vpp)


class _RealAccumulator:
    """Running sum held as an unevaluated pair (s, t)."""

    __slots__ = ("_s", "_t")

    def __init__(self, y: float = 0.0):
        self._s, self._t = float(y), 0.0

    def add(self, y: float) -> None:
        y, u = two_sum(y, self._t)
        self._s, self._t = two_sum(y, self._s)
        if self._s == 0:
            self._s = u
        else:
            self._t += u

    def total(self) -> float:
        return self._s + self._t


class CompensatedSum:
    """Complex running sum with error-tracked real and imaginary parts."""

    __slots__ = ("_re", "_im", "count")

    def __init__(self):
        self._re = _RealAccumulator()
        self._im = _RealAccumulator()
        self.count = 0

    def add(self, z: complex) -> None:
        self._re.add(z.real)
        self._im.add(z.imag)
        self.count += 1

    @property
    def value(self) -> complex:
        return complex(self._re.total(), self._im.total())


def interleaved(n_min: int, n_max: int) -> Iterator[int]:
    """0, +1, -1, +2, -2, ... restricted to [n_min, n_max]."""
    if n_min <= 0 <= n_max:
        yield 0
    k = 1
    while k <= n_max or -k >= n_min:
        if k <= n_max:
            yield k
        if -k >= n_min:
            yield -k
        k += 1
