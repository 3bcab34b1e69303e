"""Closed real intervals with outward rounding.

Sums are rounded outward only when inexact (detected with the TwoSum error
term), products and quotients are widened by one ulp in each direction and
transcendental functions by two, which covers the accuracy of the platform
libm.  Division by an interval that contains zero and
square roots or logarithms of intervals reaching below their domain raise
:class:`DomainError` rather than returning an unbounded enclosure.
"""

from __future__ import annotations

import math
from fractions import Fraction

_INF = math.inf


class DomainError(ArithmeticError):
    """An operation was applied outside the domain it is provably valid on."""


def _down(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, -_INF)
    return x


def _up(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, _INF)
    return x


def _sum_bounds(a: float, b: float) -> tuple[float, float]:
    """Tight enclosure of the exact a + b, using the TwoSum error term."""
    s = a + b
    if math.isinf(s):
        return (s, s) if s > 0 else (-_INF, s)
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    if err > 0:
        return s, _up(s)
    if err < 0:
        return _down(s), s
    return s, s


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        lo = float(lo)
        hi = lo if hi is None else float(hi)
        if math.isnan(lo) or math.isnan(hi) or lo > hi:
            raise ValueError(f"invalid interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def point(cls, x: float) -> Interval:
        return cls(x, x)

    @classmethod
    def from_fraction(cls, q: Fraction | int) -> Interval:
        q = Fraction(q)
        f = float(q)
        if Fraction(f) == q:
            return cls(f, f)
        return cls(_down(f), _up(f))

    @classmethod
    def hull(cls, *values: float) -> Interval:
        return cls(min(values), max(values))

    # -- basic queries -------------------------------------------------
    @property
    def mid(self) -> float:
        return 0.5 * self.lo + 0.5 * self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def intersect(self, other: Interval) -> Interval:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            # both enclose the same true range, so this only happens through
            # rounding of a degenerate set; fall back to the tighter operand
            return self if self.width <= other.width else other
        return Interval(lo, hi)

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    # -- arithmetic ----------------------------------------------------
    @staticmethod
    def _coerce(v) -> Interval:
        if isinstance(v, Interval):
            return v
        if isinstance(v, Fraction):
            return Interval.from_fraction(v)
        if isinstance(v, (int, float)):
            return Interval(v, v)
        raise TypeError(f"cannot combine Interval with {type(v).__name__}")

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> Interval:
        if not isinstance(other, _NUMERIC):
            return NotImplemented
        o = self._coerce(other)
        return Interval(_sum_bounds(self.lo, o.lo)[0], _sum_bounds(self.hi, o.hi)[1])

    __radd__ = __add__

    def __sub__(self, other) -> Interval:
        if not isinstance(other, _NUMERIC):
            return NotImplemented
        o = self._coerce(other)
        return Interval(_sum_bounds(self.lo, -o.hi)[0], _sum_bounds(self.hi, -o.lo)[1])

    def __rsub__(self, other) -> Interval:
        if not isinstance(other, _NUMERIC):
            return NotImplemented
        return self._coerce(other) - self

    def __mul__(self, other) -> Interval:
        if not isinstance(other, _NUMERIC):
            return NotImplemented
        o = self._coerce(other)
        prods = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        # 0 * inf never arises: all enclosures are finite
        return Interval(_down(min(prods)), _up(max(prods)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> Interval:
        if not isinstance(other, _NUMERIC):
            return NotImplemented
        o = self._coerce(other)
        if o.contains_zero():
            raise DomainError(f"division by interval containing zero: {o}")
        quots = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi]
        return Interval(_down(min(quots)), _up(max(quots)))

    def __rtruediv__(self, other) -> Interval:
        if not isinstance(other, _NUMERIC):
            return NotImplemented
        return self._coerce(other) / self

    def __pow__(self, n: int) -> Interval:
        if not isinstance(n, int) or n < 0:
            raise TypeError("only non-negative integer powers are supported")
        if n == 0:
            return Interval(1.0, 1.0)
        if n % 2 == 1 or self.lo >= 0:
            lo, hi = self.lo, self.hi
        elif self.hi <= 0:
            lo, hi = -self.hi, -self.lo
        else:
            lo, hi = 0.0, max(-self.lo, self.hi)
        if n % 2 == 1:
            return Interval(_down(lo**n, n), _up(hi**n, n))
        return Interval(max(0.0, _down(lo**n, n)), _up(hi**n, n))

    def abs(self) -> Interval:
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0.0, max(-self.lo, self.hi))

    def sqrt(self) -> Interval:
        if self.lo < 0:
            raise DomainError(f"sqrt of interval reaching below zero: {self}")
        return Interval(max(0.0, _down(math.sqrt(self.lo))), _up(math.sqrt(self.hi)))

    def exp(self) -> Interval:
        return Interval(max(0.0, _down(math.exp(self.lo), 2)), _up(math.exp(self.hi), 2))

    def log(self) -> Interval:
        if self.lo <= 0:
            raise DomainError(f"log of interval reaching zero or below: {self}")
        return Interval(_down(math.log(self.lo), 2), _up(math.log(self.hi), 2))


# operand types the arithmetic accepts; anything else defers to the other operand
_NUMERIC = (Interval, int, float, Fraction)

PI = Interval(3.141592653589793, 3.1415926535897936)


def pi_power(p: int) -> Interval:
    return PI**p
