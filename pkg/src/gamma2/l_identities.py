"""Identities tying the lambda-values of zeros to L-values.

Exact identities compare rationals; the analytic ones compare mpmath reals.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial

import mpmath

from .cn_kernel import cn_polynomials, euler_numbers
from .lambda_poly import e_tilde_even, e_tilde_odd, second_coefficient_sum
from .polynomial import RationalPolynomial, refine_root, sturm_isolate
from .qforms import even_multiplier


class Identity(str, Enum):
    THM_ZEROS = "thm_zeros"
    COR_32 = "cor_32"
    THM_EVEN_PLUS = "thm_even_plus"
    THM_EVEN_MINUS = "thm_even_minus"
    COR_EVEN_SUM = "cor_even_sum"
    C_CONSISTENCY = "c_consistency"


@dataclass(frozen=True)
class IdentityReport:
    identity: Identity
    k: int
    lhs: object
    rhs: object
    passed: bool
    mode: str  # "exact" or "numeric(<tol>)"
    details: dict | None = None


def _exact(identity: Identity, k: int, lhs: Fraction, rhs: Fraction, details=None) -> IdentityReport:
    return IdentityReport(identity, k, lhs, rhs, lhs == rhs, "exact", details)


def odd_constant(k: int) -> Fraction:
    """C = 4(-1)^k / e_{2k}."""
    return Fraction(4 * (-1) ** k, euler_numbers(k)[k])


def zero_sum_odd(k: int, trunc: int | None = None) -> Fraction:
    """Sum over zeros of E_{2k+1,chi} of 1/lambda, from the monic polynomial."""
    return second_coefficient_sum(e_tilde_odd(k, trunc))


def verify_thm_zeros(k: int, trunc: int | None = None) -> IdentityReport:
    if k < 0:
        raise ValueError("k must be nonnegative")
    s = zero_sum_odd(k, trunc)
    return _exact(Identity.THM_ZEROS, k, odd_constant(k), 4 * (2 * k + 1) - 16 * s, {"sum": s})


def verify_thm_even(k: int, sign: int, trunc: int | None = None) -> IdentityReport:
    if k < 1:
        raise ValueError("k must be at least 1")
    s = second_coefficient_sum(e_tilde_even(k, sign, trunc))
    lhs = even_multiplier(k)
    rhs = sign * 4 * (2 * k) - sign * 16 * s
    ident = Identity.THM_EVEN_PLUS if sign > 0 else Identity.THM_EVEN_MINUS
    return _exact(ident, k, lhs, rhs, {"sum": s})


def verify_cor_even_sum(k: int, trunc: int | None = None) -> IdentityReport:
    if k < 1:
        raise ValueError("k must be at least 1")
    sp = second_coefficient_sum(e_tilde_even(k, 1, trunc))
    sm = second_coefficient_sum(e_tilde_even(k, -1, trunc))
    return _exact(Identity.COR_EVEN_SUM, k, Fraction(k), sp + sm, {"plus": sp, "minus": sm})


def cusp_multiplicity(p: RationalPolynomial) -> int:
    """Multiplicity of x = 1 as a root."""
    m = 0
    divisor = RationalPolynomial([-1, 1])
    while p.degree > 0 and p(Fraction(1)) == 0:
        p = p // divisor
        m += 1
    return m


def verify_cor_32(k: int, trunc: int | None = None, precision_bits: int = 128) -> IdentityReport:
    """Transport the roots rho of p_{2k+1} by lambda -> (lambda-1)/lambda and compare sums.

    The x = 1/lambda roots of the monic odd polynomial should be 1 (the cusp,
    with some multiplicity) together with rho/(rho-1) for each rho.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    tol = Fraction(1, 10 ** 20)
    exact_sum = zero_sum_odd(k, trunc)
    etil = e_tilde_odd(k, trunc)
    m = cusp_multiplicity(etil)
    p = cn_polynomials(k)[k]
    rho_tol = Fraction(1, 2 ** (precision_bits // 2 + 8))
    transported = Fraction(0)
    images = []
    for r in sturm_isolate(p) if p.degree > 0 else []:
        rho = refine_root(r, rho_tol)
        img = rho / (rho - 1)
        images.extend([img] * r.multiplicity)
        transported += img * r.multiplicity
    rest = etil
    for _ in range(m):
        rest = rest // RationalPolynomial([-1, 1])
    # every transported value must be a root of the cofactor
    transport_ok = rest.degree == len(images) and all(
        abs(rest(x)) < Fraction(1, 10 ** 15) * (1 + max(abs(c) for c in rest.coeffs)) * (1 + abs(x)) ** rest.degree
        for x in images
    )
    completed = transported + m
    diff = abs(completed - exact_sum)
    details = {
        "h_only_sum": transported,
        "cusp_multiplicity": m,
        "cusp_completed_sum": completed,
        "transport_ok": transport_ok,
    }
    passed = transport_ok and diff < tol
    with mpmath.workprec(precision_bits):
        lhs = mpmath.mpf(completed.numerator) / completed.denominator
    return IdentityReport(Identity.COR_32, k, lhs, exact_sum, passed, f"numeric({float(tol):g})", details)


def _cvz_alternating(a, n_terms: int):
    """Cohen-Villegas-Zagier acceleration of sum_{j>=0} (-1)^j a(j)."""
    d = (3 + mpmath.sqrt(8)) ** n_terms
    d = (d + 1 / d) / 2
    b = mpmath.mpf(-1)
    c = -d
    s = mpmath.mpf(0)
    for j in range(n_terms):
        c = b - c
        s += c * a(j)
        b = b * (j + n_terms) * (j - n_terms) / ((j + mpmath.mpf(1) / 2) * (j + 1))
    return s / d


def beta_L(k: int, precision_bits: int = 128, method: str = "accelerated", max_terms: int = 10 ** 6):
    """L(2k+1, chi) = sum_{n>=0} (-1)^n / (2n+1)^{2k+1}.

    ``accelerated``: CVZ weights; the terms are a moment sequence so the error
    is at most 2 L / (3 + sqrt 8)^N, and N is chosen from that.
    ``direct``: partial sums stopped once the first omitted term is below
    2^-precision_bits (k = 0 averages the last two partial sums).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    s = 2 * k + 1
    with mpmath.workprec(precision_bits + 32):
        target = mpmath.mpf(2) ** (-precision_bits)
        if method == "accelerated":
            n_terms = int(mpmath.ceil((precision_bits + 4) * mpmath.log(2) / mpmath.log(3 + mpmath.sqrt(8)))) + 2
            val = _cvz_alternating(lambda j: mpmath.mpf(2 * j + 1) ** (-s), n_terms)
            return +val
        if method != "direct":
            raise ValueError(f"unknown method {method!r}")
        if k == 0:
            # averaging consecutive partial sums leaves an error of order n^-2
            n_needed = mpmath.sqrt(1 / target)
        else:
            n_needed = (1 / target) ** (mpmath.mpf(1) / s) / 2
        if n_needed > max_terms:
            raise ArithmeticError(
                f"precision 2^-{precision_bits} unreachable within {max_terms} terms; "
                "use method='accelerated' or raise max_terms"
            )
        total = mpmath.mpf(0)
        prev = total
        n = 0
        while True:
            term = mpmath.mpf(2 * n + 1) ** (-s)
            if term < target and k > 0:
                break
            prev = total
            total += term if n % 2 == 0 else -term
            n += 1
            if k == 0 and n > n_needed:
                return (total + prev) / 2
        return +total


def beta_L_closed_form(k: int, precision_bits: int = 128):
    """e_{2k} (pi/2)^{2k+1} / (2 (2k)!), the value the constant C encodes."""
    with mpmath.workprec(precision_bits + 32):
        return euler_numbers(k)[k] * (mpmath.pi / 2) ** (2 * k + 1) / (2 * factorial(2 * k))


def verify_c_consistency(k: int, precision_bits: int = 128, tol=None) -> IdentityReport:
    if k < 1:
        raise ValueError("k must be at least 1")
    with mpmath.workprec(precision_bits + 32):
        lhs = beta_L(k, precision_bits)
        rhs = beta_L_closed_form(k, precision_bits)
        tol = mpmath.mpf(2) ** (-precision_bits // 2) if tol is None else mpmath.mpf(tol)
        passed = abs(lhs - rhs) < tol
    return IdentityReport(Identity.C_CONSISTENCY, k, lhs, rhs, bool(passed), f"numeric({mpmath.nstr(tol, 3)})")
