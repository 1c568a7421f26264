import math
from fractions import Fraction

import gmpy2
import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from gamma2 import arc_engine as arc
from gamma2.cn_kernel import cn_polynomials
from gamma2.polynomial import refine_root, sturm_isolate

GAMMA0 = ((1, -1), (1, 0))
GAMMA1 = ((0, -1), (1, 0))


def _matmul(a, b):
    return tuple(
        tuple(sum(a[i][m] * b[m][j] for m in range(2)) for j in range(2)) for i in range(2)
    )


def test_slash_class():
    assert arc.slash_class((1, 0), ((1, 0), (0, 1))) == (1, 0)
    assert arc.slash_class((0, 1), _matmul(GAMMA0, GAMMA1)) == (0, 3)
    assert arc.slash_class((0, 1), GAMMA0) == (1, 0)
    with pytest.raises(ValueError):
        arc.slash_class((1, 0), ((2, 0), (0, 1)))


def test_lattice_points_are_coprime_and_in_class():
    pts = arc.lattice_points(arc.DEFAULT_CLASSES, 400)
    assert len(pts) == len(set(pts))
    for c, d in pts:
        assert math.gcd(c, d) == 1 and c * c + d * d <= 400
        assert (c % 4, d % 4) in arc.DEFAULT_CLASSES


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 12), st.floats(0.01, 3.13))
def test_main_term_recovery(k, theta):
    ev = arc.evaluate_F(arc.LatticeSumSpec(k, n_max=1), theta)
    assert ev.n_terms == 2
    with gmpy2.context(gmpy2.get_context(), precision=128):
        exact = -2 * gmpy2.sin((2 * k + 1) * gmpy2.mpfr(theta) / 2)
        assert abs(ev.value_im - exact) < gmpy2.mpfr(2) ** -118
    assert abs(ev.value_re_residual) < 2.0 ** -118


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 15), st.floats(0.05, 3.09))
def test_p30_identity(k, theta):
    """The class-(0,3)/(1,0) pairs with {|c|,|d|} = {3,0} sum to (2/3^(2k+1)) sin((2k+1)theta/2) i.

    These pairs share the factor 3, so they never enter the coprime sum F.
    """
    n = 2 * k + 1
    pts = [
        (c, d)
        for c in range(-3, 4)
        for d in range(-3, 4)
        if sorted((abs(c), abs(d))) == [0, 3] and (c % 4, d % 4) in arc.DEFAULT_CLASSES
    ]
    assert sorted(pts) == [(-3, 0), (0, 3)]
    assert not set(pts) & set(arc.lattice_points(arc.DEFAULT_CLASSES, 9))
    with gmpy2.context(gmpy2.get_context(), precision=128):
        w = gmpy2.exp(gmpy2.mpc(0, gmpy2.mpfr(theta) / 2))
        total = sum((c * w + d * w.conjugate()) ** (-n) for c, d in pts)
        expect = 2 * gmpy2.sin(n * gmpy2.mpfr(theta) / 2) / gmpy2.mpfr(3) ** n
        assert abs(total.real) < gmpy2.mpfr(2) ** -120
        assert abs(total.imag - expect) < gmpy2.mpfr(2) ** -110


def test_real_residual_certificate():
    ev = arc.evaluate_F(arc.LatticeSumSpec(25, n_max=10 ** 4), math.pi / 2)
    assert abs(ev.value_re_residual) < 1e-25
    assert abs(ev.value_re_residual) / ev.max_summand < 2.0 ** -64


def test_remainder_below_two_for_weight_53():
    spec = arc.LatticeSumSpec(26, n_max=10 ** 4)
    for i in range(21):
        theta = (0.05 + 0.9 * i / 20) * math.pi
        ev = arc.evaluate_F(spec, theta)
        assert abs(ev.remainder) + ev.tail_bound < 2


@settings(max_examples=8, deadline=None)
@given(st.floats(math.acos(arc.ARC_ALPHA), math.pi - math.acos(arc.ARC_ALPHA)))
def test_truncation_consistency(theta):
    k, n = 10, 400
    a = arc.evaluate_F(arc.LatticeSumSpec(k, n_max=n), theta)
    b = arc.evaluate_F(arc.LatticeSumSpec(k, n_max=4 * n), theta)
    assert abs(a.value_im - b.value_im) < arc.tail_bound(k, n, arc.ARC_ALPHA)


def test_tail_bound_shape():
    k = 25
    v = arc.tail_bound(k, 100, 0.9877)
    assert v == pytest.approx(5 / (k - 1) * 100.0 ** (1 - k) * (1 - 0.9877) ** (-k - 0.5), rel=1e-12)
    assert arc.tail_bound(k, 10 ** 4, 0.9877) / v == pytest.approx(10.0 ** (2 * (1 - k)), rel=1e-9)
    assert arc.tail_bound(26, 100, 1e-12) == pytest.approx(5 / 25 * 100.0 ** -25, rel=1e-9)
    assert arc.tail_bound(26, 100, 1e-12) < arc.tail_bound(26, 100, 0.1)
    for bad in (0, 1, 1.5, -0.2):
        with pytest.raises(ValueError):
            arc.tail_bound(k, 100, bad)


def test_error_budget():
    b = arc.error_budget(26)
    assert b.E1 < 1e-24
    assert b.E3 < 1e-10
    assert b.E2 == pytest.approx(0.656, abs=1e-3)
    assert b.near_total < 0.657
    assert arc.error_budget(16).h_k > 0
    assert all(arc.h_of(k) > 0 for k in range(15, 101))


def test_empty_and_degenerate_scans():
    assert arc.scan_arc(5, 1.0, 1.0).intervals == []
    res = arc.scan_arc(5, 0.5, 2.5, grid=2, spec=arc.LatticeSumSpec(5, n_max=400))
    assert res.count <= 1


def test_scan_deterministic_across_workers():
    spec = arc.LatticeSumSpec(5, n_max=400)
    a = arc.scan_arc(5, 0.3, 2.8, 40, spec, workers=1)
    b = arc.scan_arc(5, 0.3, 2.8, 40, spec, workers=2)
    assert [p.value_im for p in a.points] == [p.value_im for p in b.points]
    assert a.intervals == b.intervals


def test_rsd_interval_count_weight_53():
    assert arc.rsd_interval_count(26) == 23
    with pytest.raises(ValueError, match="2k\\+1 > 51"):
        arc.rsd_fraction(25)


@pytest.mark.slow
def test_weight_7_zeros_transport_to_sturm_roots():
    spec = arc.LatticeSumSpec(3)  # default n_max, tail below 10^-3
    res = arc.scan_arc(3, 0.05 * math.pi, 0.95 * math.pi, 48, spec)
    assert res.count == 2
    roots = [refine_root(r, Fraction(1, 10 ** 15)) for r in sturm_isolate(cn_polynomials(3)[3])]
    for iv in res.intervals:
        lam = arc.theta_star_to_lambda(arc.bisect_zero(spec, iv)).real
        assert min(abs(lam - mpmath.mpf(r.numerator) / r.denominator) for r in roots) < 1e-8


def test_zero_intervals_geometry():
    k = 20
    for fam in (2 * k - 1, 2 * k + 1):
        for iv in arc.zero_intervals(fam, k):
            assert arc.INTERLACE_RANGE[0] <= iv.lo < iv.hi <= arc.INTERLACE_RANGE[1]
            if not iv.clipped:
                assert iv.hi - iv.lo == 2 * Fraction(2, (2 * k + 1) * (2 * k - 1))


def test_interlace_requires_k_above_15():
    with pytest.raises(ValueError, match="requires k>15"):
        arc.interlace_check(15)


def test_interlace_k20():
    rep = arc.interlace_check(20, arc.LatticeSumSpec(20, n_max=10 ** 4))
    assert rep.half_width == Fraction(2, 41 * 39)
    assert rep.disjoint and rep.separated
    assert rep.all_certified and rep.pattern_ok
    for (fam, j), signs in rep.endpoint_signs.items():
        if j % 2 == 0:
            assert signs == (1, -1)
