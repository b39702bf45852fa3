"""Positive real intervals with endpoint openness.

One type covers both the open intervals used for allotments and the compact
intervals used for temperings. Arithmetic is restricted to what the
projection of temperings needs: products, real powers and hulls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class PositiveInterval:
    """An interval ``I`` with ``0 <= lo <= hi <= inf``.

    ``lo_open`` and ``hi_open`` mark excluded endpoints. An endpoint at 0 or
    at infinity is always open.
    """

    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval endpoints must not be NaN")
        if lo < 0:
            raise ValueError(f"interval lower endpoint {lo} is negative")
        if lo > hi:
            raise ValueError(f"empty interval: lo={lo} > hi={hi}")
        if lo == 0 and not self.lo_open:
            raise ValueError("an interval with lo = 0 must be open at lo")
        if math.isinf(hi) and not self.hi_open:
            raise ValueError("an interval with hi = inf must be open at hi")
        if lo == hi and (self.lo_open or self.hi_open or lo == 0):
            raise ValueError(f"degenerate interval at {lo} must be closed and positive")

    @classmethod
    def closed(cls, lo: float, hi: float) -> "PositiveInterval":
        return cls(lo, hi, False, False)

    @classmethod
    def open(cls, lo: float, hi: float) -> "PositiveInterval":
        return cls(lo, hi, True, True)

    @classmethod
    def point(cls, value: float) -> "PositiveInterval":
        return cls(value, value, False, False)

    @classmethod
    def orthant(cls) -> "PositiveInterval":
        """The whole half-line ``(0, inf)``."""
        return cls(0.0, math.inf, True, True)

    @property
    def is_compact(self) -> bool:
        return not (self.lo_open or self.hi_open)

    @property
    def is_bounded(self) -> bool:
        """Bounded away from both 0 and infinity."""
        return self.lo > 0 and math.isfinite(self.hi)

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        """Membership in the closed hull, widened by ``tol``."""
        return self.lo - tol <= x <= self.hi + tol

    def __mul__(self, other: "PositiveInterval") -> "PositiveInterval":
        return interval_mul(self, other)

    def __pow__(self, c: float) -> "PositiveInterval":
        return interval_pow(self, c)

    def __str__(self) -> str:
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{format_number(self.lo)}, {format_number(self.hi)}{right}"


ONE = PositiveInterval.point(1.0)


def format_number(x: float) -> str:
    if math.isinf(x):
        return "inf"
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def _make(lo: float, hi: float, lo_open: bool, hi_open: bool) -> PositiveInterval:
    if lo == 0.0:
        lo_open = True
    if math.isinf(hi):
        hi_open = True
    if lo == hi and (lo_open or hi_open):
        # rounding collapsed an open interval onto a point; keep the point
        lo_open = hi_open = False
    return PositiveInterval(lo, hi, lo_open, hi_open)


def interval_mul(a: PositiveInterval, b: PositiveInterval) -> PositiveInterval:
    """Elementwise product ``{i * j | i in a, j in b}``.

    For positive intervals this is endpoint-wise; an endpoint of the product is
    open iff either factor's endpoint is open.
    """
    # float overflow of hi lands on inf, which _make reopens
    return _make(a.lo * b.lo, a.hi * b.hi, a.lo_open or b.lo_open, a.hi_open or b.hi_open)


def _power(x: float, c: float) -> float:
    if x == 0.0:
        return 0.0 if c > 0 else math.inf
    if math.isinf(x):
        return math.inf if c > 0 else 0.0
    if c.is_integer() and 1 <= c <= 64:
        # left fold, so integer powers agree bit-for-bit with repeated interval_mul
        out = x
        for _ in range(int(c) - 1):
            out *= x
        return out
    try:
        return x**c
    except OverflowError:
        return math.inf


def interval_pow(a: PositiveInterval, c: float) -> PositiveInterval:
    """``{i**c | i in a}`` for any finite real exponent ``c``.

    ``a**0`` is the closed point ``[1, 1]``. Negative exponents swap the
    endpoints together with their openness.
    """
    c = float(c)
    if not math.isfinite(c):
        raise ValueError("exponent must be finite")
    if c == 0.0:
        return ONE
    if c > 0:
        return _make(_power(a.lo, c), _power(a.hi, c), a.lo_open, a.hi_open)
    return _make(_power(a.hi, c), _power(a.lo, c), a.hi_open, a.lo_open)


def interval_hull(intervals: Iterable[PositiveInterval]) -> PositiveInterval:
    """Smallest interval containing all of ``intervals``.

    An endpoint of the hull is closed if any interval attaining it is closed.
    """
    items = list(intervals)
    if not items:
        raise ValueError("hull of no intervals")
    lo = min(i.lo for i in items)
    hi = max(i.hi for i in items)
    lo_open = all(i.lo_open for i in items if i.lo == lo)
    hi_open = all(i.hi_open for i in items if i.hi == hi)
    return _make(lo, hi, lo_open, hi_open)


def interval_prod(intervals: Iterable[PositiveInterval]) -> PositiveInterval:
    result = ONE
    for item in intervals:
        result = interval_mul(result, item)
    return result
