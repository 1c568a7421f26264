"""Euler and Bernoulli numbers, and the cn(u) coefficient polynomials.

The Jacobi function cn(u) with parameter lam satisfies
``cn'^2 = (1 - cn^2)(1 - lam + lam cn^2)``; one differentiation gives
``cn'' = (2 lam - 1) cn - 2 lam cn^3``. Writing
``cn(u) = sum_k a_k u^(2k)`` with ``a_k = (-1)^k p_{2k+1}(lam) / (2k)!``
turns this into a recursion on polynomials in lam.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .polynomial import RationalPolynomial


@dataclass(frozen=True)
class EulerNumberTable:
    values: tuple[int, ...]  # entry j is e_{2j}

    def __getitem__(self, j: int) -> int:
        return self.values[j]


@dataclass(frozen=True)
class CnCoefficientTable:
    k_max: int
    polys: tuple[RationalPolynomial, ...]  # entry k is p_{2k+1}

    def __getitem__(self, k: int) -> RationalPolynomial:
        return self.polys[k]


def euler_numbers(j_max: int) -> EulerNumberTable:
    """e_0, e_2, ..., e_{2 j_max} from the exact inverse of the cosine series."""
    if j_max < 0:
        raise ValueError("j_max must be nonnegative")
    # cos t = sum c_j t^{2j}, c_j = (-1)^j/(2j)!; sec = 1/cos
    cos = [Fraction((-1) ** j, factorial(2 * j)) for j in range(j_max + 1)]
    sec = [Fraction(0)] * (j_max + 1)
    sec[0] = Fraction(1)
    for n in range(1, j_max + 1):
        sec[n] = -sum(cos[i] * sec[n - i] for i in range(1, n + 1))
    values = []
    for j, s in enumerate(sec):
        v = s * factorial(2 * j)
        assert v.denominator == 1
        values.append(int(v))
    return EulerNumberTable(tuple(values))


def bernoulli_numbers(n_max: int) -> list[Fraction]:
    """B_0..B_{n_max} (B_1 = -1/2) from sum_{j<=n} C(n+1, j) B_j = 0."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    b = [Fraction(1)]
    for n in range(1, n_max + 1):
        s = sum(comb(n + 1, j) * b[j] for j in range(n))
        b.append(-s / (n + 1))
    return b


def cn_polynomials(k_max: int) -> CnCoefficientTable:
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    lam = RationalPolynomial.x()
    lin = lam.scale(2) - 1  # 2 lam - 1
    two_lam = lam.scale(2)
    a = [RationalPolynomial([1])]
    sq: list[RationalPolynomial] = []  # sq[m] = sum_{i+j=m} a_i a_j
    for k in range(k_max):
        sq.append(sum((a[i] * a[k - i] for i in range(k + 1)), RationalPolynomial()))
        cube = sum((a[i] * sq[k - i] for i in range(k + 1)), RationalPolynomial())
        nxt = (lin * a[k] - two_lam * cube).scale(Fraction(1, (2 * k + 2) * (2 * k + 1)))
        a.append(nxt)
    polys = tuple(ak.scale((-1) ** k * factorial(2 * k)) for k, ak in enumerate(a))
    return CnCoefficientTable(k_max, polys)
