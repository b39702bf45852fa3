import math
from functools import reduce

import pytest
from hypothesis import given, strategies as st

from vertexical.intervals import (
    ONE, PositiveInterval as PI, interval_hull, interval_mul, interval_pow, interval_prod,
)


def test_mul_examples():
    assert interval_mul(PI.closed(1, 2), PI.point(3)) == PI.closed(3, 6)
    assert interval_mul(PI.open(0, 1), PI.open(0, 1)) == PI.open(0, 1)
    i = PI(0.5, 7, True, False)
    assert i * ONE == i


def test_mul_openness_is_per_endpoint():
    out = PI(1, 2, True, False) * PI(1, 3, False, True)
    assert (out.lo_open, out.hi_open) == (True, True)
    out = PI(1, 2, False, False) * PI(1, 3, False, True)
    assert (out.lo_open, out.hi_open) == (False, True)


def test_mul_overflow_gives_open_infinity():
    out = PI.closed(1, 1e200) * PI.closed(1, 1e200)
    assert math.isinf(out.hi) and out.hi_open


def test_pow_examples():
    assert PI.closed(1, 2) ** 2 == PI.closed(1, 4)
    assert PI.open(3, 5) ** 0 == ONE
    assert PI.closed(2, 4) ** -1 == PI.closed(0.25, 0.5)


def test_pow_negative_swaps_flags():
    out = PI(2, 4, True, False) ** -1
    assert out == PI(0.25, 0.5, False, True)


def test_pow_zero_lower_endpoint_negative_exponent():
    out = PI.open(0, 2) ** -2
    assert out.lo == 0.25 and out.lo_open and math.isinf(out.hi) and out.hi_open


def test_pow_real_exponent():
    out = PI.closed(4, 9) ** 0.5
    assert out == PI.closed(2, 3)


def test_hull_keeps_closed_attaining_endpoint():
    h = interval_hull([PI.open(1, 3), PI(1, 2, False, False), PI(2, 3, False, True)])
    assert h == PI(1, 3, False, True)


def test_hull_single_and_empty():
    assert interval_hull([PI.closed(1, 2)]) == PI.closed(1, 2)
    with pytest.raises(ValueError):
        interval_hull([])


@pytest.mark.parametrize("args", [(0, 1, False, True), (1, math.inf, True, False), (2, 1), (1, 1, True, False),
                                  (-1, 1, True, True), (math.nan, 1)])
def test_invalid_intervals(args):
    with pytest.raises(ValueError):
        PI(*args)


def test_str():
    assert str(PI.closed(3, 12)) == "[3, 12]"
    assert str(PI.orthant()) == "(0, inf)"
    assert str(PI(0.5, 2, True, False)) == "(0.5, 2]"


positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


@st.composite
def intervals(draw):
    a, b = sorted((draw(positive), draw(positive)))
    if a == b:
        return PI.point(a)
    return PI(a, b, draw(st.booleans()), draw(st.booleans()))


@given(intervals(), st.integers(min_value=1, max_value=6))
def test_integer_power_equals_repeated_product(i, n):
    folded = reduce(interval_mul, [i] * n, ONE)
    assert i ** n == folded
    assert interval_prod([i] * n) == folded


@given(intervals(), intervals())
def test_mul_commutes(a, b):
    assert a * b == b * a


@given(intervals(), st.floats(min_value=-3, max_value=3))
def test_pow_contains_image_of_midpoint(i, c):
    out = i ** c
    assert out.contains(i.midpoint ** c, tol=1e-9 * max(1.0, out.hi))
