import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ubv import interval as iv
from ubv.interval import DirectedValue

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6)
positive = st.fractions(min_value=Fraction(1, 1000), max_value=10**6, max_denominator=10**6)


def enclose(q):
    return DirectedValue.exact(q)


@given(rationals, rationals)
def test_add_sub_mul_contain_exact(a, b):
    A, B = enclose(a), enclose(b)
    assert (A + B).contains(a + b)
    assert (A - B).contains(a - b)
    assert (A * B).contains(a * b)


@given(rationals, positive)
def test_div_contains_exact(a, b):
    assert (enclose(a) / enclose(b)).contains(a / b)


def _mp_fraction(x):
    return Fraction(*mpmath.libmp.to_rational(x._mpf_))


@settings(max_examples=200)
@given(positive)
def test_log_and_exp_contain_high_precision_value(q):
    with mpmath.workprec(200):
        lq = mpmath.log(mpmath.mpf(q.numerator) / q.denominator)
        eq = mpmath.exp(mpmath.mpf(q.numerator) / q.denominator / 10000)
        l1 = mpmath.log1p(mpmath.mpf(q.numerator) / q.denominator)
    assert iv.log(enclose(q)).contains(_mp_fraction(lq))
    assert iv.exp(enclose(q / 10000)).contains(_mp_fraction(eq))
    assert iv.log1p(enclose(q)).contains(_mp_fraction(l1))


def test_exact_enclosure_of_decimal():
    x = DirectedValue.exact("0.1")
    assert x.lo < x.hi
    assert x.contains("0.1")
    assert DirectedValue.exact(3) == DirectedValue(3.0, 3.0)


def test_truncates_to():
    assert DirectedValue(0.2614972, 0.2614973).truncates_to("0.26149")
    assert not DirectedValue(0.2614899, 0.2614973).truncates_to("0.26149")
    assert DirectedValue(1.08276, 1.08277).truncates_to("1.08")


def test_log_int_big():
    n = 2**49 * 4363953127297
    enc = iv.log_int(n)
    with mpmath.workprec(200):
        ref = _mp_fraction(mpmath.log(mpmath.mpf(n)))
    assert enc.contains(ref)
    assert enc.width < 1e-12


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        DirectedValue(1.0, 0.0)


def test_division_by_zero_interval():
    with pytest.raises(ZeroDivisionError):
        DirectedValue(1.0, 2.0) / DirectedValue(-1.0, 1.0)


def test_constants_contain_reference():
    assert iv.PI.contains(Fraction("3.14159265358979323846264338327950288"))
    assert iv.LN2.lo <= math.log(2) <= iv.LN2.hi
