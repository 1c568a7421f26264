from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gamma2.qforms import lambda_series, theta_bundle
from gamma2.qseries import FracQSeries, PrecisionError, ScaledSeries, series_arith

T = 96


def test_theta3_times_inverse_is_one():
    t3 = theta_bundle(T).theta3
    prod = t3 * t3.invert()
    assert prod == FracQSeries.one(T)


def test_lambda_substitution_leading_term():
    lam2 = lambda_series(64).series.substitute_q_power(2)
    assert lam2.leading() == (8, 16)
    assert lam2.trunc == 128


def test_theta2_fourth_power_leading_term():
    assert (theta_bundle(T).theta2 ** 4).leading() == (4, 16)


def test_reading_past_truncation_is_an_error():
    s = FracQSeries({0: 1}, 10)
    assert s[9] == 0
    with pytest.raises(PrecisionError):
        s[10]


def test_empty_precision_window():
    a = FracQSeries({}, 6)  # O(q^(6/8)), nothing known to be nonzero
    b = FracQSeries({-5: 1}, -4)
    with pytest.raises(PrecisionError, match="empty precision window"):
        a * b


def test_invert_zero_series():
    with pytest.raises(ZeroDivisionError):
        FracQSeries({}, 20).invert()


def test_laurent_inverse_of_lambda():
    lam = lambda_series(64).series
    inv = lam.invert()
    assert inv.leading() == (-4, Fraction(1, 16))
    assert (inv * lam).agrees_with(FracQSeries.one(inv.trunc + 4))


def test_product_truncation_is_tight():
    a = FracQSeries({2: 1, 3: 1}, 10)  # valuation 2, known below 10
    b = FracQSeries({1: 1}, 7)  # valuation 1, known below 7
    assert (a * b).trunc == min(10 + 1, 7 + 2)


def test_scaled_series_invariants():
    s = ScaledSeries(-3, Fraction(4), FracQSeries({2: 1}, 8))
    assert s.unit_power == 1
    with pytest.raises(ValueError):
        ScaledSeries(0, 0, FracQSeries({}, 8))


def test_series_arith_ops():
    t3 = theta_bundle(T).theta3
    assert series_arith(t3, 2, "pow") == t3 * t3
    assert series_arith(t3, None, "invert") == t3.invert()
    assert series_arith(t3, 2, "substitute_q_power") == t3.substitute_q_power(2)


# properties -------------------------------------------------------------

theta_choice = st.sampled_from(["theta2", "theta3", "theta4"])


@st.composite
def theta_monomials(draw):
    """Random products of theta constants, shifted and scaled."""
    tb = theta_bundle(T)
    s = FracQSeries.one(T)
    for name in draw(st.lists(theta_choice, min_size=1, max_size=3)):
        s = s * getattr(tb, name)
    c = draw(st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(bool))
    return s.scale(c).shift(draw(st.integers(-8, 8)))


@settings(max_examples=25, deadline=None)
@given(theta_monomials(), theta_monomials(), theta_monomials())
def test_mul_commutative_associative(a, b, c):
    assert (a * b) == (b * a)
    assert ((a * b) * c).agrees_with(a * (b * c))


@settings(max_examples=25, deadline=None)
@given(theta_monomials())
def test_substitute_identity(f):
    assert f.substitute_q_power(1) == f


@settings(max_examples=25, deadline=None)
@given(theta_monomials(), st.integers(2, 4))
def test_substitution_is_multiplicative(f, m):
    g = f * f
    assert (g.substitute_q_power(m)).agrees_with(f.substitute_q_power(m) * f.substitute_q_power(m))


@settings(max_examples=25, deadline=None)
@given(theta_monomials())
def test_inverse_roundtrip(f):
    assert (f * f.invert()).agrees_with(FracQSeries.one(T))
