"""Lattice sums for F_{2k+1} on the arc z = (e^{i theta} - 1)/2 and sign certification.

F(theta) = sum over coprime (c, d) in the four residue classes mod 4 of
(c e^{i theta/2} + d e^{-i theta/2})^{-(2k+1)}.  It is purely imaginary and
equals -2i sin((2k+1) theta / 2) plus a remainder that is small away from
theta = 0, pi.  A sign of Im F is *certified* when |Im F| exceeds the
truncation tail bound plus a rounding budget.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import gmpy2
from gmpy2 import mpc, mpfr

from .qforms import lambda_numeric

DEFAULT_CLASSES: tuple[tuple[int, int], ...] = ((0, 3), (1, 0), (2, 1), (3, 2))
DEFAULT_PRECISION = 128
DEFAULT_N_MAX = 10 ** 4
ARC_ALPHA = 0.9877  # |cos theta| bound on (0.05 pi, 0.95 pi)
RSD_RANGE = (Fraction(1, 20), Fraction(19, 20))  # in units of pi
INTERLACE_RANGE = (Fraction(1, 10), Fraction(9, 10))
GAMMA = 0.1562
C_COS = 0.952
ALPHA_FLOOR = 2.0 ** -20
BISECT_MAX = 60
RETRY_LIMIT = 6


class PrecisionExhausted(ArithmeticError):
    pass


@dataclass(frozen=True)
class LatticeSumSpec:
    k: int
    classes: tuple[tuple[int, int], ...] = DEFAULT_CLASSES
    n_max: int | None = None
    precision_bits: int = DEFAULT_PRECISION

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(tuple(c) for c in self.classes))
        if self.n_max is None:
            object.__setattr__(self, "n_max", default_n_max(self.k))
        if self.n_max < 1:
            raise ValueError("n_max must be positive")
        if self.precision_bits < 24:
            raise ValueError("precision_bits must be at least 24")

    def with_k(self, k: int) -> "LatticeSumSpec":
        return replace(self, k=k)


def default_n_max(k: int, alpha: float = ARC_ALPHA, target: float = 1e-3) -> int:
    """max(10^4, smallest n_max whose tail bound is below ``target``)."""
    if k < 2:
        return DEFAULT_N_MAX
    n = DEFAULT_N_MAX
    if tail_bound(k, n, alpha) < target:
        return n
    lo, hi = n, n
    while tail_bound(k, hi, alpha) >= target:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_bound(k, mid, alpha) < target:
            hi = mid
        else:
            lo = mid
    return hi


def slash_class(pair: tuple[int, int], gamma: Sequence[Sequence[int]]) -> tuple[int, int]:
    """(alpha, beta) . gamma reduced mod 4 for gamma in SL2(Z)."""
    (a, b), (c, d) = gamma
    if a * d - b * c != 1:
        raise ValueError("matrix must have determinant 1")
    x, y = pair
    return ((x * a + y * c) % 4, (x * b + y * d) % 4)


@lru_cache(maxsize=16)
def lattice_points(classes: tuple[tuple[int, int], ...], n_max: int) -> tuple[tuple[int, int], ...]:
    """Coprime (c, d) with c^2 + d^2 <= n_max in the given classes mod 4."""
    wanted = set(classes)
    r = math.isqrt(n_max)
    out = []
    for c in range(-r, r + 1):
        rem = n_max - c * c
        dm = math.isqrt(rem)
        cm = c % 4
        for beta in range(4):
            if (cm, beta) not in wanted:
                continue
            start = -dm + ((beta + dm) % 4)  # smallest d >= -dm with d = beta mod 4
            for d in range(start, dm + 1, 4):
                if math.gcd(c, d) == 1:
                    out.append((c, d))
    out.sort(key=lambda p: (p[0] * p[0] + p[1] * p[1], p))
    return tuple(out)


def tail_bound(k: int, n_max: int, alpha: float) -> float:
    """Bound on the terms with c^2 + d^2 > n_max, valid where |cos theta| <= alpha:
    5 (1 - alpha)^{-k-1/2} n_max^{1-k} / (k - 1)."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if k < 2:
        raise ValueError("tail bound needs k >= 2")
    if n_max < 100:
        raise ValueError("tail bound needs n_max >= 100")
    log = math.log(5) - (k + 0.5) * math.log1p(-alpha) + (1 - k) * math.log(n_max) - math.log(k - 1)
    return math.exp(log) if log < 700 else math.inf


def local_alpha(theta: float) -> float:
    return max(abs(math.cos(theta)), ALPHA_FLOOR)


@dataclass(frozen=True)
class ArcEvaluation:
    theta: float
    k: int
    value_im: object  # gmpy2.mpfr
    value_re_residual: object
    tail_bound: float
    main_term: float  # 2 sin((2k+1) theta / 2); Im F is close to -main_term
    max_summand: float
    n_terms: int
    rounding_bound: float

    @property
    def margin(self) -> float:
        return self.tail_bound + self.rounding_bound

    @property
    def certified(self) -> bool:
        return abs(self.value_im) > self.margin

    @property
    def sign(self) -> int:
        """Sign of Im F if certified, else 0."""
        if not self.certified:
            return 0
        return 1 if self.value_im > 0 else -1

    @property
    def remainder(self) -> float:
        return float(self.value_im) + self.main_term


def _to_mpfr(theta):
    if isinstance(theta, Fraction):
        return mpfr(theta.numerator) / theta.denominator
    return mpfr(theta)


def evaluate_F(spec: LatticeSumSpec, theta) -> ArcEvaluation:
    """Im and Re of the truncated lattice sum at ``theta`` (radians, float or mpfr)."""
    n = 2 * spec.k + 1
    with gmpy2.context(gmpy2.get_context(), precision=spec.precision_bits):
        th = _to_mpfr(theta)
        if not 0 < th < gmpy2.const_pi():
            raise ValueError("theta must lie in (0, pi)")
        w = gmpy2.exp(mpc(0, th / 2))
        wb = w.conjugate()
        total = mpc(0)
        biggest = mpfr(0)
        pts = lattice_points(spec.classes, spec.n_max)
        for c, d in pts:
            term = (c * w + d * wb) ** (-n)
            total += term
            a = abs(term)
            if a > biggest:
                biggest = a
        theta_f = float(th)
        main = 2 * math.sin(n * theta_f / 2)
        eps = 2.0 ** (-spec.precision_bits + 4)
        rounding = len(pts) * (n + 1) * eps * float(biggest) if pts else 0.0
        if rounding > 0.25:
            raise PrecisionExhausted("precision exhausted: rounding budget swamps the sum")
        try:
            tb = tail_bound(spec.k, spec.n_max, local_alpha(theta_f))
        except ValueError:
            tb = math.inf
        return ArcEvaluation(
            theta=theta_f,
            k=spec.k,
            value_im=total.imag,
            value_re_residual=total.real,
            tail_bound=tb,
            main_term=main,
            max_summand=float(biggest),
            n_terms=len(pts),
            rounding_bound=rounding,
        )


def theta_star_to_lambda(theta, precision_bits: int = DEFAULT_PRECISION):
    """lambda(-1/z_theta) = lambda(1 + i cot(theta/2)), real for theta on the arc."""
    import mpmath

    with mpmath.workprec(precision_bits):
        th = mpmath.mpf(float(theta)) if not isinstance(theta, mpmath.mpf) else theta
        tau = mpmath.mpc(1, mpmath.cot(th / 2))
        return lambda_numeric(tau, precision_bits)


# scanning --------------------------------------------------------------------

@dataclass(frozen=True)
class SignChange:
    lo: float
    hi: float
    sign_lo: int
    sign_hi: int


@dataclass
class ScanResult:
    k: int
    theta_lo: float
    theta_hi: float
    points: list[ArcEvaluation] = field(default_factory=list)
    intervals: list[SignChange] = field(default_factory=list)
    uncertified: list[float] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.intervals)


def _eval_many(spec: LatticeSumSpec, thetas: Sequence[float], workers: int) -> list[ArcEvaluation]:
    if workers <= 1 or len(thetas) < 2 * workers:
        return [evaluate_F(spec, t) for t in thetas]
    chunk = math.ceil(len(thetas) / workers)
    parts = [list(thetas[i : i + chunk]) for i in range(0, len(thetas), chunk)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        results = ex.map(_eval_chunk, [spec] * len(parts), parts)
    return [e for part in results for e in part]


def _eval_chunk(spec, thetas):
    return [evaluate_F(spec, t) for t in thetas]


def _retry(spec: LatticeSumSpec, theta: float, left: float, right: float) -> ArcEvaluation | None:
    """Look for a certified point near an uncertified grid point."""
    for target in (right, left):
        off = (target - theta) / 2
        for _ in range(RETRY_LIMIT):
            cand = theta + off
            if abs(off) < 1e-15:
                break
            ev = evaluate_F(spec, cand)
            if ev.certified:
                return ev
            off /= 2
    return None


def default_grid(k: int, theta_lo: float, theta_hi: float) -> int:
    """About eight samples per zero spacing of the main term."""
    spacing = 2 * math.pi / (2 * k + 1)
    return max(2, int(math.ceil(8 * (theta_hi - theta_lo) / spacing)) + 1)


def scan_arc(
    k: int,
    theta_lo: float,
    theta_hi: float,
    grid: int | None = None,
    spec: LatticeSumSpec | None = None,
    workers: int = 1,
) -> ScanResult:
    """Certified sign changes of Im F on a uniform theta grid."""
    spec = LatticeSumSpec(k) if spec is None else spec.with_k(k)
    result = ScanResult(k, theta_lo, theta_hi)
    if theta_hi <= theta_lo:
        return result
    if not (0 < theta_lo and theta_hi < math.pi):
        raise ValueError("theta range must lie inside (0, pi)")
    grid = default_grid(k, theta_lo, theta_hi) if grid is None else grid
    if grid < 2:
        raise ValueError("grid must be at least 2")
    step = (theta_hi - theta_lo) / (grid - 1)
    thetas = [theta_lo + i * step for i in range(grid)]
    thetas[-1] = theta_hi
    evals = _eval_many(spec, thetas, workers)
    points: list[ArcEvaluation] = []
    for i, ev in enumerate(evals):
        if not ev.certified:
            left = thetas[i - 1] if i > 0 else ev.theta
            right = thetas[i + 1] if i + 1 < len(thetas) else ev.theta
            again = _retry(spec, ev.theta, left, right)
            if again is None:
                result.uncertified.append(ev.theta)
            else:
                ev = again
        points.append(ev)
    result.points = points
    certified = [p for p in points if p.certified]
    for a, b in zip(certified, certified[1:]):
        if a.sign != b.sign:
            result.intervals.append(SignChange(a.theta, b.theta, a.sign, b.sign))
    return result


def bisect_zero(spec: LatticeSumSpec, interval: SignChange, max_iter: int = BISECT_MAX) -> float:
    """Shrink a certified sign change; stops once the midpoint is no longer certified."""
    lo, hi = interval.lo, interval.hi
    s_lo = interval.sign_lo
    for _ in range(max_iter):
        mid = (lo + hi) / 2
        if mid <= lo or mid >= hi:
            break
        ev = evaluate_F(spec, mid)
        if not ev.certified:
            break
        if ev.sign == s_lo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def rsd_fraction(
    k: int, spec: LatticeSumSpec | None = None, grid: int | None = None, workers: int = 1
) -> tuple[Fraction, ScanResult]:
    """(certified sign changes on (0.05 pi, 0.95 pi)) / (k - 1)."""
    if 2 * k + 1 <= 51:
        raise ValueError("requires 2k+1 > 51")
    lo = float(RSD_RANGE[0]) * math.pi
    hi = float(RSD_RANGE[1]) * math.pi
    scan = scan_arc(k, lo, hi, grid, spec, workers)
    return Fraction(scan.count, k - 1), scan


def rsd_interval_count(k: int) -> int:
    """Number of odd A with [A pi/(2k+1), (A+2) pi/(2k+1)] inside (0.05 pi, 0.95 pi)."""
    n = 2 * k + 1
    return sum(
        1
        for a in range(1, n, 2)
        if Fraction(a, n) > RSD_RANGE[0] and Fraction(a + 2, n) < RSD_RANGE[1]
    )


# error budget ------------------------------------------------------------------

SIX_PAIRS = ((1, 2), (3, 2), (3, 4), (5, 4), (5, 6), (7, 6))
FAR_PAIRS = ((1, 4), (1, 6), (1, 8), (3, 6), (3, 8), (5, 2), (5, 8), (7, 2), (7, 4), (9, 2), (9, 4))
WORST_K = 25  # the uniform constants are evaluated at the threshold weight 51


@dataclass(frozen=True)
class ErrorBudget:
    k: int
    E1: float
    E2: float
    E3: float
    e1: float
    e2: float
    e3: float
    e4: float
    g_k: float
    h_k: float
    gamma: float = GAMMA
    alpha: float = ARC_ALPHA
    C_cos: float = C_COS

    @property
    def near_total(self) -> float:
        return self.E1 + self.E2 + self.E3


def pab_bound(a: int, b: int, k: int, s: float = 0.079) -> float:
    """Bound on |P(a, b)| for b != 0 given min(sin^2, cos^2)(theta/2) > s^2."""
    return 2 / ((a - b) ** 2 + 4 * a * b * s * s) ** k + 2 / ((a - b) ** 2 + 2 * a * b) ** k


def g_of(k: float) -> float:
    return (
        8 / 3 ** (2 * k + 1)
        + 2 / 1.195 ** k
        + 2 / 5 ** k
        + 10 / 1.585 ** k
        + 10 / 13 ** k
        + 44 / 9 ** k
        + 2283 / ((k - 1) * 4.8 ** k)
    )


def h_of(x: float) -> float:
    n = 2 * x + 1
    return 2 * math.pi / n - 2 * math.pi ** 3 / (6 * n ** 3) - g_of(x - 1)


def error_budget(k: int) -> ErrorBudget:
    if k < 2:
        raise ValueError("k must be at least 2")
    E1 = sum(2 / (2 * n + 1) ** 51 for n in range(1, 5))
    E2 = sum(pab_bound(a, b, WORST_K) for a, b in SIX_PAIRS)
    E3 = 44 / 9 ** WORST_K
    e1 = 8 / 3 ** (2 * k + 1)
    e2 = 2 / 1.195 ** k + 2 / 5 ** k + 10 / 1.585 ** k + 10 / 13 ** k
    e3 = 44 / 9 ** k
    e4 = 2283 / ((k - 1) * 4.8 ** k)
    h = h_of(k) if k >= 3 else -math.inf
    return ErrorBudget(k, E1, E2, E3, e1, e2, e3, e4, e1 + e2 + e3 + e4, h)


# interlacing ----------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroInterval:
    family: int  # 2k-1 or 2k+1
    j: int
    lo: Fraction  # in units of pi, after clipping
    hi: Fraction
    clipped: bool

    def as_radians(self) -> tuple[float, float]:
        return float(self.lo) * math.pi, float(self.hi) * math.pi


@dataclass
class InterlaceReport:
    k: int
    alphas: list[Fraction]  # alpha_{j,k} / pi
    intervals_2k_minus_1: list[ZeroInterval]
    intervals_2k_plus_1: list[ZeroInterval]
    endpoint_signs: dict[tuple[int, int], tuple[int, int]]
    expected_signs: dict[tuple[int, int], tuple[int, int]]
    disjoint: bool
    separated: bool
    half_width: Fraction  # in units of pi

    @property
    def all_certified(self) -> bool:
        return all(0 not in s for s in self.endpoint_signs.values())

    @property
    def pattern_ok(self) -> bool:
        return all(
            self.endpoint_signs[key] == self.expected_signs[key]
            for key in self.endpoint_signs
        )

    def failures(self) -> list[tuple[int, int]]:
        return [key for key, s in self.endpoint_signs.items() if s != self.expected_signs[key]]


def zero_intervals(family: int, k: int, rng=INTERLACE_RANGE) -> list[ZeroInterval]:
    """Intervals of half-width 2 pi/((2k+1)(2k-1)) about 2 pi j / family, clipped to ``rng``."""
    hw = Fraction(2, (2 * k + 1) * (2 * k - 1))
    out = []
    j = 0
    while Fraction(2 * j, family) - hw < 1:
        center = Fraction(2 * j, family)
        lo, hi = center - hw, center + hw
        clo, chi = max(lo, rng[0]), min(hi, rng[1])
        if clo < chi:
            out.append(ZeroInterval(family, j, clo, chi, (clo, chi) != (lo, hi)))
        j += 1
    return out


def _disjoint(intervals: Sequence[ZeroInterval]) -> bool:
    for i, a in enumerate(intervals):
        for b in intervals[i + 1 :]:
            if not (a.hi <= b.lo or b.hi <= a.lo):
                return False
    return True


def _separated(minus: Sequence[ZeroInterval], plus: Sequence[ZeroInterval]) -> bool:
    ordered = sorted(minus, key=lambda iv: iv.lo)
    for a, b in zip(ordered, ordered[1:]):
        if not any(a.hi <= p.lo and p.hi <= b.lo for p in plus):
            return False
    return True


def interlace_check(k: int, spec: LatticeSumSpec | None = None) -> InterlaceReport:
    if k <= 15:
        raise ValueError("requires k>15")
    base = LatticeSumSpec(k) if spec is None else spec
    minus = zero_intervals(2 * k - 1, k)
    plus = zero_intervals(2 * k + 1, k)
    signs: dict[tuple[int, int], tuple[int, int]] = {}
    expected: dict[tuple[int, int], tuple[int, int]] = {}
    for family, ivs, kk in ((2 * k - 1, minus, k - 1), (2 * k + 1, plus, k)):
        s = base.with_k(kk)
        with gmpy2.context(gmpy2.get_context(), precision=s.precision_bits):
            pi = gmpy2.const_pi()
            for iv in ivs:
                lo = evaluate_F(s, _to_mpfr(iv.lo) * pi)
                hi = evaluate_F(s, _to_mpfr(iv.hi) * pi)
                signs[(family, iv.j)] = (lo.sign, hi.sign)
                par = 1 if iv.j % 2 == 0 else -1
                expected[(family, iv.j)] = (par, -par)
    return InterlaceReport(
        k=k,
        alphas=[Fraction(2 * j, 2 * k - 1) for j in range(k)],
        intervals_2k_minus_1=minus,
        intervals_2k_plus_1=plus,
        endpoint_signs=signs,
        expected_signs=expected,
        disjoint=_disjoint(minus + plus),
        separated=_separated(minus, plus),
        half_width=Fraction(2, (2 * k + 1) * (2 * k - 1)),
    )
