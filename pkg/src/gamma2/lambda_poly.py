"""Recognise modular functions as polynomials in lambda or 1/lambda.

The extraction is greedy: the lowest-order term of the running remainder is
cancelled with the matching power of the basis series until nothing is left
on the known window.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .polynomial import RationalPolynomial
from .qforms import (
    DEFAULT_EVEN_READING,
    LambdaSeries,
    eisenstein_even,
    eisenstein_odd,
    g_hat,
    lambda_series,
    theta_bundle,
)
from .qseries import FracQSeries, PrecisionError

LAMBDA_STEP = 4  # lambda = 16 q^{1/2} + ..., i.e. valuation 4 on the 1/8 grid
HEADROOM = 8


class Basis(str, Enum):
    LAMBDA = "lambda"
    INV_LAMBDA = "1/lambda"


class NotLambdaPolynomial(ValueError):
    pass


@dataclass(frozen=True)
class LambdaPolynomialResult:
    basis: Basis
    poly: RationalPolynomial
    residual_ok: bool
    trunc_used: int


def required_trunc(max_deg: int) -> int:
    """Grid units needed past the leading exponent for a degree ``max_deg`` extraction."""
    return LAMBDA_STEP * max_deg + HEADROOM


def to_lambda_polynomial(
    f: FracQSeries, basis: Basis | str, max_deg: int, lam: LambdaSeries | None = None
) -> LambdaPolynomialResult:
    basis = Basis(basis)
    if basis is Basis.LAMBDA:
        lowest = 0
        if f.min_exp < 0:
            raise NotLambdaPolynomial("series has a pole; not a polynomial in lambda")
    else:
        lowest = -LAMBDA_STEP * max_deg
        if f.min_exp < lowest:
            raise NotLambdaPolynomial("not a polynomial of stated degree")
    need = lowest + required_trunc(max_deg) if basis is Basis.INV_LAMBDA else required_trunc(max_deg)
    if f.trunc < need:
        raise PrecisionError(f"insufficient truncation {f.trunc}; need at least {need}")
    if lam is None:
        lam = lambda_series(f.trunc + 2 * LAMBDA_STEP * (max_deg + 2))
    base = lam.series if basis is Basis.LAMBDA else lam.series.invert()
    powers = [FracQSeries.one(lam.trunc + LAMBDA_STEP * max_deg)]
    for _ in range(max_deg):
        powers.append(powers[-1] * base)

    coeffs = [Fraction(0)] * (max_deg + 1)
    rem = f
    step = LAMBDA_STEP if basis is Basis.LAMBDA else -LAMBDA_STEP
    while not rem.is_zero():
        v, c = rem.leading()
        if v % LAMBDA_STEP:
            raise NotLambdaPolynomial(f"term q^({v}/8) is off the lambda grid")
        i = v // step
        if basis is Basis.LAMBDA and (v < 0 or i > max_deg):
            break
        if basis is Basis.INV_LAMBDA and (v > 0 or i > max_deg):
            break
        pv, pc = powers[i].leading()
        if pv != v:
            raise NotLambdaPolynomial(f"cannot cancel term at q^({v}/8)")
        a = c / pc
        coeffs[i] += a
        rem = rem - powers[i].scale(a)
    if rem.trunc < need:
        raise PrecisionError(f"basis series too short: window {rem.trunc} < {need}")
    return LambdaPolynomialResult(basis, RationalPolynomial(coeffs), rem.is_zero(), rem.trunc)


def _checked(res: LambdaPolynomialResult, what: str) -> RationalPolynomial:
    if not res.residual_ok:
        raise NotLambdaPolynomial(f"{what}: not a polynomial of stated degree (nonzero residual)")
    return res.poly


def p_poly_ratio(k: int, trunc: int) -> FracQSeries:
    """4 g_hat_{2k+1} / (theta3^{4k} theta2^2)."""
    tb = theta_bundle(trunc)
    den = (tb.theta3 ** (4 * k)) * (tb.theta2 ** 2)
    return g_hat(k, trunc).scale(4) * den.invert()


def default_trunc(k: int) -> int:
    return 8 * k + 64


def p_poly_oracle(k: int, trunc: int | None = None) -> RationalPolynomial:
    """p_{2k+1}(lambda) read off the q-expansion of 4 g_hat / (theta3^{4k} theta2^2)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    trunc = default_trunc(k) if trunc is None else trunc
    f = p_poly_ratio(k, trunc)
    res = to_lambda_polynomial(f, Basis.LAMBDA, max(k - 1, 0), lambda_series(trunc))
    return _checked(res, f"p_{2 * k + 1}")


def e_tilde_odd_series(k: int, trunc: int) -> FracQSeries:
    tb = theta_bundle(trunc)
    den = (tb.theta2 ** (4 * k)) * (tb.theta3 ** 2) if k else tb.theta3 ** 2
    return eisenstein_odd(k, trunc).series * den.invert()


def e_tilde_odd(k: int, trunc: int | None = None) -> RationalPolynomial:
    """Monic degree-k polynomial P with E_{2k+1,chi} / (theta2^{4k} theta3^2) = P(1/lambda)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    trunc = default_trunc(k) if trunc is None else trunc
    f = e_tilde_odd_series(k, trunc)
    res = to_lambda_polynomial(f, Basis.INV_LAMBDA, k, lambda_series(trunc + 8 * k + 16))
    return _checked(res, f"E~_{2 * k + 1}")


def e_tilde_even_series(k: int, sign: int, trunc: int, reading: str = DEFAULT_EVEN_READING) -> FracQSeries:
    tb = theta_bundle(trunc)
    return eisenstein_even(k, sign, trunc, reading).series * (tb.theta2 ** (4 * k)).invert()


def e_tilde_even_result(
    k: int, sign: int, trunc: int | None = None, reading: str = DEFAULT_EVEN_READING
) -> LambdaPolynomialResult:
    if k < 1:
        raise ValueError("weight 0 excluded")
    trunc = default_trunc(k) if trunc is None else trunc
    f = e_tilde_even_series(k, sign, trunc, reading)
    return to_lambda_polynomial(f, Basis.INV_LAMBDA, k, lambda_series(trunc + 8 * k + 16))


def e_tilde_even(k: int, sign: int, trunc: int | None = None, reading: str = DEFAULT_EVEN_READING) -> RationalPolynomial:
    """Monic degree-k polynomial P with E_{2k}^{sign} / theta2^{4k} = P(1/lambda)."""
    return _checked(e_tilde_even_result(k, sign, trunc, reading), f"E~_{2 * k}^{'+' if sign > 0 else '-'}")


def second_coefficient_sum(p: RationalPolynomial) -> Fraction:
    """For monic P of degree d, minus the x^{d-1} coefficient (sum of the roots)."""
    if p.leading != 1:
        raise ValueError("polynomial is not monic")
    d = p.degree
    return -p.coeffs[d - 1] if d >= 1 else Fraction(0)
