"""Truncated Laurent series in q**(1/8) with rational coefficients.

A series stores the coefficient of q**(n/8) under the integer key ``n``.
Everything at or above ``trunc`` is unknown; reading it is an error, so a
truncation mistake can never masquerade as a zero coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping

GRID = 8


class PrecisionError(ValueError):
    """Raised when a coefficient beyond the known window is requested."""


class FracQSeries:
    __slots__ = ("coeffs", "trunc", "min_exp")

    def __init__(self, coeffs: Mapping[int, object], trunc: int):
        clean = {}
        for n, c in coeffs.items():
            if n >= trunc:
                continue
            c = c if isinstance(c, Fraction) else Fraction(c)
            if c:
                clean[n] = c
        self.coeffs: dict[int, Fraction] = clean
        self.trunc = trunc
        # valuation; equals trunc when no coefficient is known to be nonzero
        self.min_exp = min(clean) if clean else trunc

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, object]], trunc: int) -> "FracQSeries":
        acc: dict[int, Fraction] = {}
        for n, c in terms:
            if n < trunc:
                acc[n] = acc.get(n, 0) + c
        return cls(acc, trunc)

    @classmethod
    def one(cls, trunc: int) -> "FracQSeries":
        return cls({0: 1}, trunc)

    def __getitem__(self, n: int) -> Fraction:
        if n >= self.trunc:
            raise PrecisionError(f"coefficient q^({n}/8) unknown; series truncated at {self.trunc}/8")
        return self.coeffs.get(n, Fraction(0))

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self.coeffs

    def leading(self) -> tuple[int, Fraction]:
        if not self.coeffs:
            raise PrecisionError("series has no known nonzero coefficient")
        return self.min_exp, self.coeffs[self.min_exp]

    def items(self):
        return sorted(self.coeffs.items())

    def truncate(self, trunc: int) -> "FracQSeries":
        if trunc > self.trunc:
            raise PrecisionError(f"cannot extend truncation from {self.trunc} to {trunc}")
        return FracQSeries(self.coeffs, trunc)

    def __repr__(self) -> str:
        head = ", ".join(f"{n}:{c}" for n, c in self.items()[:6])
        return f"FracQSeries({{{head}{', ...' if len(self.coeffs) > 6 else ''}}}, trunc={self.trunc})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FracQSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def agrees_with(self, other: "FracQSeries") -> bool:
        """Equality on the common known window."""
        t = min(self.trunc, other.trunc)
        keys = {n for n in self.coeffs if n < t} | {n for n in other.coeffs if n < t}
        return all(self.coeffs.get(n, 0) == other.coeffs.get(n, 0) for n in keys)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other) -> "FracQSeries":
        if not isinstance(other, FracQSeries):
            other = FracQSeries({0: other}, self.trunc)
        t = min(self.trunc, other.trunc)
        acc = {n: c for n, c in self.coeffs.items() if n < t}
        for n, c in other.coeffs.items():
            if n < t:
                acc[n] = acc.get(n, 0) + c
        return FracQSeries(acc, t)

    __radd__ = __add__

    def __neg__(self) -> "FracQSeries":
        return FracQSeries({n: -c for n, c in self.coeffs.items()}, self.trunc)

    def __sub__(self, other) -> "FracQSeries":
        if not isinstance(other, FracQSeries):
            other = FracQSeries({0: other}, self.trunc)
        return self + (-other)

    def __rsub__(self, other) -> "FracQSeries":
        return (-self) + other

    def scale(self, c) -> "FracQSeries":
        c = Fraction(c)
        return FracQSeries({n: c * v for n, v in self.coeffs.items()}, self.trunc)

    def shift(self, m: int) -> "FracQSeries":
        """Multiply by q**(m/8)."""
        return FracQSeries({n + m: c for n, c in self.coeffs.items()}, self.trunc + m)

    def __mul__(self, other) -> "FracQSeries":
        if not isinstance(other, FracQSeries):
            return self.scale(other)
        va, vb = self.min_exp, other.min_exp
        t = min(self.trunc + vb, other.trunc + va)
        # only an operand with no known coefficient can leave nothing known
        if t <= va + vb:
            raise PrecisionError("empty precision window")
        return FracQSeries(_convolve(self.coeffs, other.coeffs, t), t)

    __rmul__ = __mul__

    def invert(self) -> "FracQSeries":
        if not self.coeffs:
            raise ZeroDivisionError("cannot invert a series with zero leading coefficient")
        v, lead = self.leading()
        rel = self.trunc - v  # relative precision
        # normalized f = lead * q^v * (1 + u), u supported on 1..rel-1
        u = {n - v: c / lead for n, c in self.coeffs.items() if n != v}
        inv = [Fraction(0)] * rel
        inv[0] = Fraction(1)
        u_items = sorted(u.items())
        for m in range(1, rel):
            s = Fraction(0)
            for j, c in u_items:
                if j > m:
                    break
                s += c * inv[m - j]
            inv[m] = -s
        inv_lead = 1 / lead
        return FracQSeries({m - v: inv_lead * c for m, c in enumerate(inv) if c}, rel - v)

    def __truediv__(self, other) -> "FracQSeries":
        if not isinstance(other, FracQSeries):
            return self.scale(1 / Fraction(other))
        return self * other.invert()

    def __pow__(self, n: int) -> "FracQSeries":
        if n < 0:
            return self.invert() ** (-n)
        if n == 0:
            v = self.min_exp
            return FracQSeries.one(self.trunc - v)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def substitute_q_power(self, m: int) -> "FracQSeries":
        """q -> q**m: every exponent numerator (and the truncation) scales by m."""
        if m < 1:
            raise ValueError("substitution power must be a positive integer")
        return FracQSeries({m * n: c for n, c in self.coeffs.items()}, m * self.trunc)


def _convolve(a: Mapping[int, Fraction], b: Mapping[int, Fraction], t: int) -> dict[int, Fraction]:
    if not a or not b:
        return {}
    da = _common_denominator(a.values())
    db = _common_denominator(b.values())
    ai = sorted((n, int(c * da)) for n, c in a.items())
    bi = sorted((n, int(c * db)) for n, c in b.items())
    acc: dict[int, int] = {}
    for na, ca in ai:
        limit = t - na
        for nb, cb in bi:
            if nb >= limit:
                break
            k = na + nb
            acc[k] = acc.get(k, 0) + ca * cb
    den = da * db
    return {n: Fraction(c, den) for n, c in acc.items() if c}


def _common_denominator(values) -> int:
    d = 1
    for v in values:
        d = lcm(d, v.denominator)
    return d


def series_arith(a: FracQSeries, b, op: str) -> FracQSeries:
    """Dispatch helper: ``add``, ``mul``, ``invert``, ``pow`` (b = exponent),
    ``substitute_q_power`` (b = m)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "invert":
        return a.invert()
    if op == "pow":
        return a ** b
    if op == "substitute_q_power":
        return a.substitute_q_power(b)
    raise ValueError(f"unknown series operation {op!r}")


@dataclass(frozen=True)
class ScaledSeries:
    """The value ``i**unit_power * scalar * series``."""

    unit_power: int
    scalar: Fraction
    series: FracQSeries

    def __post_init__(self):
        object.__setattr__(self, "unit_power", self.unit_power % 4)
        object.__setattr__(self, "scalar", Fraction(self.scalar))
        if self.scalar == 0:
            raise ValueError("ScaledSeries scalar must be nonzero")

    def is_real(self) -> bool:
        return self.unit_power % 2 == 0

    def real_series(self) -> FracQSeries:
        """The series itself when the prefactor is real (+-1 times scalar)."""
        if not self.is_real():
            raise ValueError("series carries an imaginary prefactor")
        sign = 1 if self.unit_power == 0 else -1
        return self.series.scale(sign * self.scalar)
