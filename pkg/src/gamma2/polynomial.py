"""Dense univariate polynomials over Q and Sturm-sequence real root isolation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


def _to_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RationalPolynomial:
    """Immutable polynomial, ``coeffs[i]`` is the coefficient of x**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_to_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "RationalPolynomial":
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> "RationalPolynomial":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RationalPolynomial([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RationalPolynomial({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*x" if c != 1 else "x")
            else:
                terms.append(f"{c}*x^{i}" if c != 1 else f"x^{i}")
        return " + ".join(terms).replace("+ -", "- ")

    def __add__(self, other) -> "RationalPolynomial":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "RationalPolynomial":
        return RationalPolynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "RationalPolynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "RationalPolynomial":
        return _coerce(other) - self

    def __mul__(self, other) -> "RationalPolynomial":
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RationalPolynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = RationalPolynomial([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "RationalPolynomial":
        c = _to_fraction(c)
        return RationalPolynomial(c * a for a in self.coeffs)

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def __call__(self, x):
        """Horner evaluation; exact for rational ``x``."""
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, other: "RationalPolynomial") -> tuple["RationalPolynomial", "RationalPolynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        if len(rem) - 1 < dq:
            return RationalPolynomial(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            quot[i - dq] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return RationalPolynomial(quot), RationalPolynomial(rem[:dq])

    def __divmod__(self, other):
        return self.divmod(_coerce(other))

    def __floordiv__(self, other) -> "RationalPolynomial":
        return self.divmod(_coerce(other))[0]

    def __mod__(self, other) -> "RationalPolynomial":
        return self.divmod(_coerce(other))[1]

    def monic(self) -> "RationalPolynomial":
        return self.scale(1 / self.leading)

    def primitive(self) -> "RationalPolynomial":
        """Positive rescaling to coprime integer coefficients (signs preserved)."""
        if self.is_zero():
            return self
        from math import gcd, lcm

        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return RationalPolynomial(Fraction(v // g) for v in ints)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)


def _coerce(p) -> RationalPolynomial:
    if isinstance(p, RationalPolynomial):
        return p
    return RationalPolynomial([p])


def poly_gcd(a: RationalPolynomial, b: RationalPolynomial) -> RationalPolynomial:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, (a % b).primitive()
    return a.monic() if not a.is_zero() else a


def poly_arith(a: RationalPolynomial, b: RationalPolynomial | None, op: str, x=None):
    """Dispatch helper: ``add``, ``sub``, ``mul``, ``derivative``, ``eval``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "derivative":
        return a.derivative()
    if op in ("eval", "eval-at-rational"):
        return a(_to_fraction(x))
    raise ValueError(f"unknown polynomial operation {op!r}")


def squarefree_decomposition(p: RationalPolynomial) -> list[tuple[RationalPolynomial, int]]:
    """Yun's algorithm: pairs (factor, multiplicity) with squarefree, pairwise coprime factors."""
    if p.is_zero():
        raise ValueError("zero polynomial has no root set")
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    i = 1
    while b.degree > 0:
        d = c - b.derivative()
        g = poly_gcd(b, d) if not d.is_zero() else b.monic()
        if g.degree > 0:
            out.append((g, i))
        b = b // g
        c = d // g
        i += 1
    return out


def sturm_chain(p: RationalPolynomial) -> list[RationalPolynomial]:
    if p.is_zero():
        raise ValueError("zero polynomial has no Sturm chain")
    if p.degree == 0:
        return [p.primitive()]
    chain = [p.primitive(), p.derivative().primitive()]
    while chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        chain.append((-r).primitive())
    return chain


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _variations(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for u, v in zip(nz, nz[1:]) if u != v)


def variations_at(chain: Sequence[RationalPolynomial], x) -> int:
    return _variations([_sign(q(x)) for q in chain])


def variations_at_infinity(chain: Sequence[RationalPolynomial], positive: bool) -> int:
    signs = []
    for q in chain:
        s = _sign(q.leading)
        if not positive and q.degree % 2:
            s = -s
        signs.append(s)
    return _variations(signs)


def count_real_roots(p: RationalPolynomial, lo=None, hi=None) -> int:
    """Distinct real roots in (lo, hi]; ``None`` means an infinite endpoint."""
    chain = sturm_chain(p)
    va = variations_at_infinity(chain, False) if lo is None else variations_at(chain, _to_fraction(lo))
    vb = variations_at_infinity(chain, True) if hi is None else variations_at(chain, _to_fraction(hi))
    return va - vb


def cauchy_bound(p: RationalPolynomial) -> Fraction:
    lead = abs(p.leading)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class IsolatedRoot:
    """Isolating interval for one distinct real root of ``poly``.

    ``squarefree`` is the squarefree factor carrying the root as a simple
    zero; sign-based bisection runs on it so even multiplicities refine too.
    """

    poly: RationalPolynomial
    lo: Fraction
    hi: Fraction
    multiplicity: int = 1
    squarefree: RationalPolynomial | None = field(default=None, compare=False)

    @property
    def factor(self) -> RationalPolynomial:
        return self.squarefree if self.squarefree is not None else self.poly

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def bisect(self) -> "IsolatedRoot":
        """Halve the interval, keeping the half containing the root."""
        if self.is_exact:
            return self
        f = self.factor
        mid = (self.lo + self.hi) / 2
        fm = f(mid)
        if fm == 0:
            return IsolatedRoot(self.poly, mid, mid, self.multiplicity, self.squarefree)
        if _sign(f(self.lo)) != _sign(fm):
            return IsolatedRoot(self.poly, self.lo, mid, self.multiplicity, self.squarefree)
        return IsolatedRoot(self.poly, mid, self.hi, self.multiplicity, self.squarefree)

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


def _isolate_squarefree(f: RationalPolynomial) -> list[tuple[Fraction, Fraction]]:
    if f.degree == 1:
        root = -f.coeffs[0] / f.coeffs[1]
        return [(root, root)]
    chain = sturm_chain(f)
    bound = cauchy_bound(f)
    out: list[tuple[Fraction, Fraction]] = []
    # Work with half-open (a, b]; a is never a root.
    stack = [(-bound, bound, variations_at(chain, -bound), variations_at(chain, bound))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            if f(b) == 0:
                out.append((b, b))
            else:
                out.append((a, b))
            continue
        mid = (a + b) / 2
        if f(mid) == 0:
            out.append((mid, mid))
            # nudge split point off the root so both halves have non-root left ends
            eps = (b - a) / 4
            while True:
                left = mid - eps
                right = mid + eps
                if f(left) != 0 and f(right) != 0 and count_between(chain, left, right) == 1:
                    break
                eps /= 2
            stack.append((a, left, va, variations_at(chain, left)))
            stack.append((right, b, variations_at(chain, right), vb))
            continue
        vm = variations_at(chain, mid)
        stack.append((a, mid, va, vm))
        stack.append((mid, b, vm, vb))
    out.sort()
    return out


def count_between(chain, a, b) -> int:
    return variations_at(chain, a) - variations_at(chain, b)


def _overlaps(r: IsolatedRoot, s: IsolatedRoot) -> bool:
    return not (r.hi < s.lo or s.hi < r.lo)


def sturm_isolate(p: RationalPolynomial) -> list[IsolatedRoot]:
    """Pairwise-disjoint isolating intervals for every distinct real root, ascending."""
    if p.is_zero():
        raise ValueError("zero polynomial has no root set")
    roots: list[IsolatedRoot] = []
    for factor, mult in squarefree_decomposition(p):
        for lo, hi in _isolate_squarefree(factor):
            roots.append(IsolatedRoot(p, lo, hi, mult, factor))
    roots.sort(key=lambda r: (r.lo, r.hi))
    return separate(roots)


def separate(roots: list[IsolatedRoot]) -> list[IsolatedRoot]:
    """Refine until intervals are pairwise disjoint (roots must be distinct)."""
    roots = sorted(roots, key=lambda r: (r.lo, r.hi))
    changed = True
    while changed:
        changed = False
        for i in range(len(roots) - 1):
            if _overlaps(roots[i], roots[i + 1]):
                if roots[i].is_exact and roots[i + 1].is_exact:
                    raise ValueError("coincident roots cannot be separated")
                if not roots[i].is_exact:
                    roots[i] = roots[i].bisect()
                if not roots[i + 1].is_exact:
                    roots[i + 1] = roots[i + 1].bisect()
                changed = True
        if changed:
            roots.sort(key=lambda r: (r.lo, r.hi))
    return roots


def refine_root(r: IsolatedRoot, tol) -> Fraction:
    """Rational within ``tol`` of the root, by exact bisection."""
    tol = _to_fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    while r.hi - r.lo > 2 * tol:
        r = r.bisect()
    return r.midpoint()


def refine_to_width(r: IsolatedRoot, width) -> IsolatedRoot:
    width = _to_fraction(width)
    while r.hi - r.lo > width:
        r = r.bisect()
    return r


def strictly_interlace(inner: RationalPolynomial, outer: RationalPolynomial) -> bool:
    """True when the real roots of ``inner`` strictly separate those of ``outer``.

    Both root sets must be simple and real, ``outer`` having one more root, and
    the merged order must read outer, inner, outer, ..., outer. The order is
    certified by refining the isolating intervals of both polynomials until
    they are pairwise disjoint.
    """
    if poly_gcd(inner, outer).degree > 0:
        return False  # a shared root
    ri = sturm_isolate(inner) if inner.degree > 0 else []
    ro = sturm_isolate(outer) if outer.degree > 0 else []
    if len(ri) != inner.degree or len(ro) != outer.degree or len(ro) != len(ri) + 1:
        return False
    if any(r.multiplicity > 1 for r in ri + ro):
        return False
    merged = separate(ri + ro)
    pattern = "".join("o" if r.poly == outer else "i" for r in merged)
    return pattern == "o" + "io" * len(ri)
