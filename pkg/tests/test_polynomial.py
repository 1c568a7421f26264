from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gamma2.cn_kernel import cn_polynomials
from gamma2.polynomial import (
    RationalPolynomial,
    count_real_roots,
    poly_arith,
    refine_root,
    squarefree_decomposition,
    strictly_interlace,
    sturm_isolate,
)

P = RationalPolynomial
X = P.x()

small_rational = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_difference_of_squares():
    assert poly_arith(P([1, 1]), P([-1, 1]), "mul") == P([-1, 0, 1])


def test_derivative_and_eval():
    assert poly_arith(P([1, 44, 16]), None, "derivative") == P([44, 32])
    assert poly_arith(P([1, 4]), None, "eval", Fraction(-1, 4)) == 0


def test_coeffs_strip_trailing_zeros():
    p = P([1, 2, 0, 0])
    assert p.coeffs == (1, 2)
    assert p.degree == 1
    assert P([0, 0]).coeffs == ()


def test_divmod_roundtrip():
    a = P([3, -1, 0, 5, 2])
    b = P([1, Fraction(1, 3), 1])
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_no_real_roots():
    assert sturm_isolate(P([1, 0, 1])) == []


def test_linear_root_is_exact():
    (r,) = sturm_isolate(P([1, 4]))
    assert r.lo == r.hi == Fraction(-1, 4)
    assert abs(refine_root(r, Fraction(1, 10 ** 6)) + Fraction(1, 4)) <= Fraction(1, 10 ** 6)


def test_p7_roots_to_four_digits():
    roots = [refine_root(r, Fraction(1, 10 ** 6)) for r in sturm_isolate(P([1, 44, 16]))]
    assert [round(float(x), 4) for x in roots] == [-2.7271, -0.0229]


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError, match="zero polynomial has no root set"):
        sturm_isolate(P([]))


def test_nonpositive_tolerance_rejected():
    (r,) = sturm_isolate(P([1, 4]))
    with pytest.raises(ValueError):
        refine_root(r, 0)


def test_multiplicities():
    p = (X - 1) ** 3 * (X + 2) * (X ** 2 + 1)
    roots = sturm_isolate(p)
    tol = Fraction(1, 100)
    got = [(refine_root(r, tol), r.multiplicity) for r in roots]
    assert [m for _, m in got] == [1, 3]
    assert abs(got[0][0] + 2) <= tol and abs(got[1][0] - 1) <= tol
    assert sorted(m for _, m in squarefree_decomposition(p)) == [1, 3]


def _newton(p, x, steps=60):
    dp = p.derivative()
    f = [float(c) for c in p.coeffs]
    df = [float(c) for c in dp.coeffs]

    def ev(cs, t):
        acc = 0.0
        for c in reversed(cs):
            acc = acc * t + c
        return acc

    for _ in range(steps):
        x = x - ev(f, x) / ev(df, x)
    return x


def test_p11_roots_against_newton():
    p = cn_polynomials(5)[5]
    for r in sturm_isolate(p):
        exact = refine_root(r, Fraction(1, 10 ** 8))
        newton = _newton(p, float(r.midpoint()))
        assert abs(float(exact) - newton) < 1e-6 * max(1, abs(newton))


def test_interlacing_positive_and_negative():
    outer = (X + 1) * (X + 3) * (X + 5)
    assert strictly_interlace((X + 2) * (X + 4), outer)
    assert not strictly_interlace((X + 2) * (X + 6), outer)
    assert not strictly_interlace((X + 1) * (X + 4), outer)


@st.composite
def real_rooted(draw):
    roots = draw(st.lists(small_rational, min_size=1, max_size=5))
    extra = draw(st.sampled_from([P([1]), X ** 2 + 1, X ** 2 + X + 1]))
    p = extra
    for r in roots:
        p = p * (X - r)
    return p, roots


@settings(max_examples=60, deadline=None)
@given(real_rooted())
def test_isolating_intervals_invariants(data):
    p, roots = data
    isolated = sturm_isolate(p)
    assert len(isolated) == len(set(roots)) == count_real_roots(p)
    for a, b in zip(isolated, isolated[1:]):
        assert a.hi < b.lo
    for r in isolated:
        inside = [x for x in set(roots) if r.lo <= x <= r.hi]
        assert len(inside) == 1
        assert r.multiplicity == roots.count(inside[0])


@settings(max_examples=40, deadline=None)
@given(st.lists(small_rational, min_size=1, max_size=4, unique=True), st.integers(9, 30))  # tol below half the minimal root gap
def test_refined_point_brackets_root(roots, tol_exp):
    p = P([1]) * (X ** 2 + 2)
    for r in roots:
        p = p * (X - r + Fraction(1, 7))  # shifted so roots are rarely dyadic
    tol = Fraction(1, 2 ** tol_exp)
    for r in sturm_isolate(p):
        x = refine_root(r, tol)
        f = r.factor
        assert f(x) == 0 or (f(x - tol) > 0) != (f(x + tol) > 0)


@settings(max_examples=50, deadline=None)
@given(st.lists(small_rational, max_size=5), st.lists(small_rational, max_size=5), small_rational)
def test_ring_axioms_and_evaluation(a, b, x):
    pa, pb = P(a), P(b)
    assert pa * pb == pb * pa
    assert (pa + pb)(x) == pa(x) + pb(x)
    assert (pa * pb)(x) == pa(x) * pb(x)
