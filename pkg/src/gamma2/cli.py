"""Command-line front end: ``gamma2 polys|roots|scan|interlace|identities|series``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import mpmath

from . import arc_engine as arc
from .cn_kernel import cn_polynomials
from .l_identities import (
    verify_c_consistency,
    verify_cor_32,
    verify_cor_even_sum,
    verify_thm_even,
    verify_thm_zeros,
)
from .lambda_poly import p_poly_oracle
from .polynomial import RationalPolynomial, refine_root, sturm_isolate
from .qforms import eisenstein_even, eisenstein_odd, g_normalized, lambda_series, theta_bundle


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 128
    trunc: int = 256
    n_max: int = 10 ** 4
    output_format: str = "text"
    out_path: str | None = None

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be at least 64")
        if self.trunc < 64:
            raise ValueError("trunc must be at least 64")
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown format {self.output_format!r}")


class CommandError(Exception):
    pass


def rat(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def real(x, bits: int) -> dict[str, Any]:
    digits = max(1, int(bits * math.log10(2)))
    with mpmath.workprec(bits + 8):
        if isinstance(x, Fraction):
            x = mpmath.mpf(x.numerator) / x.denominator
        return {"value": mpmath.nstr(mpmath.mpf(x), digits), "prec_bits": bits}


def poly_coeffs(p: RationalPolynomial) -> list[str]:
    return [str(c) if c.denominator == 1 else rat(c) for c in p.coeffs]


# commands ---------------------------------------------------------------------------

def cmd_polys(k_max: int, cfg: RunConfig) -> tuple[dict, bool]:
    table = cn_polynomials(k_max)
    rows = []
    ok = True
    for k in range(k_max + 1):
        rec = table[k]
        oracle = p_poly_oracle(k, max(cfg.trunc, 8 * k + 64)) if k >= 1 else RationalPolynomial([1])
        equal = rec == oracle
        ok &= equal
        rows.append(
            {
                "k": k,
                "weight": 2 * k + 1,
                "recursion": poly_coeffs(rec),
                "oracle": poly_coeffs(oracle),
                "equal": equal,
            }
        )
    return {"command": "polys", "k_max": k_max, "rows": rows}, ok


def cmd_roots(k: int, tol: Fraction, cfg: RunConfig) -> tuple[dict, bool]:
    p = cn_polynomials(k)[k]
    roots = []
    if p.degree > 0:
        for r in sturm_isolate(p):
            x = refine_root(r, tol)
            roots.append({"value": real(x, cfg.precision_bits)["value"], "rational": rat(x), "multiplicity": r.multiplicity})
    return {"command": "roots", "k": k, "tol": rat(tol), "poly": poly_coeffs(p), "roots": roots}, True


def cmd_scan(k: int, lo: float, hi: float, grid: int | None, cfg: RunConfig) -> tuple[dict, bool]:
    spec = arc.LatticeSumSpec(k, n_max=cfg.n_max, precision_bits=cfg.precision_bits)
    res = arc.scan_arc(k, lo, hi, grid, spec)
    points = [
        {
            "theta_rad": repr(p.theta),
            "imF": mpmath.nstr(mpmath.mpf(str(p.value_im)), 20),
            "sign": p.sign,
            "certified": p.certified,
            "tail_bound": f"{p.tail_bound:.6e}",
        }
        for p in res.points
    ]
    p = cn_polynomials(k)[k]
    sturm = [refine_root(r, Fraction(1, 10 ** 12)) for r in sturm_isolate(p)] if p.degree > 0 else []
    zeros = []
    ok = True
    for iv in res.intervals:
        th = arc.bisect_zero(spec, iv)
        lam = arc.theta_star_to_lambda(th, cfg.precision_bits).real
        dist = min((abs(lam - mpmath.mpf(s.numerator) / s.denominator) for s in sturm), default=mpmath.inf)
        match = bool(dist < 1e-6)
        ok &= match
        zeros.append(
            {
                "theta_lo": repr(iv.lo),
                "theta_hi": repr(iv.hi),
                "theta_star": repr(th),
                "lambda": mpmath.nstr(lam, 15),
                "matches_sturm_root": match,
            }
        )
    summary = {
        "k": k,
        "weight": 2 * k + 1,
        "zeros_found": res.count,
        "fraction": rat(Fraction(res.count, k - 1)) if k >= 2 else None,
        "uncertified": [repr(t) for t in res.uncertified],
        "n_max": spec.n_max,
        "precision_bits": spec.precision_bits,
    }
    return {"command": "scan", "summary": summary, "points": points, "zeros": zeros}, ok


def cmd_interlace(k: int, cfg: RunConfig) -> tuple[dict, bool]:
    if k <= 15:
        raise CommandError("requires k>15")
    spec = arc.LatticeSumSpec(k, n_max=cfg.n_max, precision_bits=cfg.precision_bits)
    rep = arc.interlace_check(k, spec)

    def render(ivs):
        return [
            {
                "j": iv.j,
                "lo_over_pi": rat(iv.lo),
                "hi_over_pi": rat(iv.hi),
                "clipped": iv.clipped,
                "endpoint_signs": list(rep.endpoint_signs[(iv.family, iv.j)]),
                "expected_signs": list(rep.expected_signs[(iv.family, iv.j)]),
            }
            for iv in ivs
        ]

    out = {
        "command": "interlace",
        "k": k,
        "half_width_over_pi": rat(rep.half_width),
        "alphas_over_pi": [rat(a) for a in rep.alphas],
        "intervals_2k_minus_1": render(rep.intervals_2k_minus_1),
        "intervals_2k_plus_1": render(rep.intervals_2k_plus_1),
        "disjoint": rep.disjoint,
        "separated": rep.separated,
        "all_certified": rep.all_certified,
        "pattern_ok": rep.pattern_ok,
    }
    return out, rep.disjoint and rep.separated and rep.all_certified and rep.pattern_ok


def _report_row(r) -> dict:
    def fmt(v):
        if isinstance(v, Fraction):
            return rat(v)
        if isinstance(v, int):
            return rat(Fraction(v))
        return mpmath.nstr(v, 30)

    row = {"identity": r.identity.value, "k": r.k, "lhs": fmt(r.lhs), "rhs": fmt(r.rhs), "pass": r.passed, "mode": r.mode}
    if r.details:
        row["details"] = {
            key: (rat(v) if isinstance(v, Fraction) else v) for key, v in r.details.items()
        }
    return row


def cmd_identities(k_max: int, cfg: RunConfig) -> tuple[dict, bool]:
    rows = []
    for k in range(k_max + 1):
        reports = [verify_thm_zeros(k)]
        if k >= 1:
            reports += [
                verify_cor_32(k, precision_bits=cfg.precision_bits),
                verify_thm_even(k, 1),
                verify_thm_even(k, -1),
                verify_cor_even_sum(k),
                verify_c_consistency(k, cfg.precision_bits),
            ]
        rows.extend(_report_row(r) for r in reports)
    return {"command": "identities", "k_max": k_max, "rows": rows}, all(r["pass"] for r in rows)


SERIES = ("theta2", "theta3", "theta4", "lambda", "e_odd", "g", "e_plus", "e_minus")


def cmd_series(which: str, k: int, cfg: RunConfig) -> tuple[dict, bool]:
    t = cfg.trunc
    note = None
    if which in ("theta2", "theta3", "theta4"):
        s = getattr(theta_bundle(t), which)
    elif which == "lambda":
        s = lambda_series(t).series
    elif which == "e_odd":
        s = eisenstein_odd(k, t).series
    elif which == "g":
        data = g_normalized(k, t).data
        s = data.series.scale(data.scalar)
        note = f"G_{2 * k + 1} = i^{data.unit_power} * (listed series)"
    elif which in ("e_plus", "e_minus"):
        s = eisenstein_even(k, 1 if which == "e_plus" else -1, t).series
    else:
        raise CommandError(f"unknown series {which!r}; choose from {', '.join(SERIES)}")
    out = {
        "command": "series",
        "which": which,
        "k": k,
        "trunc": s.trunc,
        "grid": 8,
        "coefficients": [[n, rat(c)] for n, c in s.items()],
    }
    if note:
        out["note"] = note
    return out, True


# rendering -----------------------------------------------------------------------

def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: (json.dumps(r[c]) if isinstance(r.get(c), (list, dict)) else r.get(c)) for c in columns})
    return buf.getvalue()


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    cmd = payload["command"]
    if fmt == "csv":
        if cmd == "scan":
            body = _csv(payload["points"], ["theta_rad", "imF", "sign", "certified", "tail_bound"])
            tail = "".join(f"# {k}: {json.dumps(v)}\n" for k, v in payload["summary"].items())
            return body + tail
        if cmd == "polys":
            return _csv(payload["rows"], ["k", "recursion", "oracle", "equal"])
        if cmd == "roots":
            return _csv(payload["roots"], ["value", "rational", "multiplicity"])
        if cmd == "identities":
            return _csv(payload["rows"], ["identity", "k", "lhs", "rhs", "pass", "mode"])
        if cmd == "series":
            return "n,coefficient\n" + "".join(f"{n},{c}\n" for n, c in payload["coefficients"])
        if cmd == "interlace":
            rows = [dict(r, family="2k-1") for r in payload["intervals_2k_minus_1"]]
            rows += [dict(r, family="2k+1") for r in payload["intervals_2k_plus_1"]]
            return _csv(rows, ["family", "j", "lo_over_pi", "hi_over_pi", "clipped", "endpoint_signs", "expected_signs"])
    return _text(payload)


def _poly_text(coeffs: list[str]) -> str:
    return str(RationalPolynomial(Fraction(c) for c in coeffs)).replace("x", "λ")


def _text(payload: dict) -> str:
    cmd = payload["command"]
    lines = []
    if cmd == "polys":
        for r in payload["rows"]:
            lines.append(f"p_{r['weight']}(λ) = {_poly_text(r['recursion'])}    oracle_equal={r['equal']}")
    elif cmd == "roots":
        lines.append(f"k={payload['k']}  p(λ) = {_poly_text(payload['poly'])}")
        lines += [f"  {r['value']}" + (f"  (multiplicity {r['multiplicity']})" if r["multiplicity"] > 1 else "") for r in payload["roots"]]
        if not payload["roots"]:
            lines.append("  (no real roots)")
    elif cmd == "scan":
        s = payload["summary"]
        lines.append(f"weight {s['weight']}: {s['zeros_found']} certified sign changes, fraction {s['fraction']}")
        for z in payload["zeros"]:
            lines.append(f"  theta*={float(z['theta_star']):.12f}  lambda={z['lambda']}  sturm_match={z['matches_sturm_root']}")
        if s["uncertified"]:
            lines.append(f"  uncertified points: {len(s['uncertified'])}")
    elif cmd == "interlace":
        lines.append(f"k={payload['k']}  half-width={payload['half_width_over_pi']}·π")
        for fam in ("intervals_2k_minus_1", "intervals_2k_plus_1"):
            for r in payload[fam]:
                lines.append(
                    f"  {fam[10:]:>6} j={r['j']:>3}  ({r['lo_over_pi']}, {r['hi_over_pi']})·π  signs={tuple(r['endpoint_signs'])}"
                )
        lines.append(
            f"disjoint={payload['disjoint']} separated={payload['separated']} "
            f"certified={payload['all_certified']} pattern_ok={payload['pattern_ok']}"
        )
    elif cmd == "identities":
        for r in payload["rows"]:
            lines.append(f"{r['identity']:<15} k={r['k']:<3} lhs={r['lhs']}  rhs={r['rhs']}  {'PASS' if r['pass'] else 'FAIL'}")
    elif cmd == "series":
        lines.append(f"{payload['which']} (k={payload['k']}), exponents n/8, known below {payload['trunc']}/8")
        lines += [f"{n:>6} {c}" for n, c in payload["coefficients"]]
        if "note" in payload:
            lines.append(payload["note"])
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gamma2", description="Zeros of level 2 Eisenstein series.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=128, help="working precision in bits")
    common.add_argument("--trunc", type=int, default=256, help="q-series truncation in 1/8 units")
    common.add_argument("--n-max", type=int, default=10 ** 4, help="lattice sum radius squared")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--out", default=None, help="write output to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("polys", parents=[common], help="p_{2k+1} by recursion and q-series")
    p.add_argument("--k-max", type=int, default=5)
    p = sub.add_parser("roots", parents=[common], help="refined real roots of p_{2k+1}")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tol", type=str, default="1/1000000000000")
    p = sub.add_parser("scan", parents=[common], help="certified sign changes on the arc")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--theta-lo", type=float, default=0.05 * math.pi)
    p.add_argument("--theta-hi", type=float, default=0.95 * math.pi)
    p.add_argument("--grid", type=int, default=None)
    p = sub.add_parser("interlace", parents=[common], help="interval structure of zeros")
    p.add_argument("--k", type=int, required=True)
    p = sub.add_parser("identities", parents=[common], help="L-value identities")
    p.add_argument("--k-max", type=int, default=5)
    p = sub.add_parser("series", parents=[common], help="q-expansion coefficient dump")
    p.add_argument("which", choices=SERIES)
    p.add_argument("--k", type=int, default=0)
    return parser


def run(argv: list[str] | None = None) -> tuple[str, bool]:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.prec, args.trunc, args.n_max, args.format, args.out)
    if args.command == "polys":
        payload, ok = cmd_polys(args.k_max, cfg)
    elif args.command == "roots":
        tol = Fraction(args.tol)
        if tol <= 0:
            raise CommandError("tolerance must be positive")
        payload, ok = cmd_roots(args.k, tol, cfg)
    elif args.command == "scan":
        payload, ok = cmd_scan(args.k, args.theta_lo, args.theta_hi, args.grid, cfg)
    elif args.command == "interlace":
        payload, ok = cmd_interlace(args.k, cfg)
    elif args.command == "identities":
        payload, ok = cmd_identities(args.k_max, cfg)
    else:
        payload, ok = cmd_series(args.which, args.k, cfg)
    text = render(payload, cfg.output_format)
    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text, ok


def main(argv: list[str] | None = None) -> int:
    try:
        text, ok = run(argv)
    except (CommandError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if "--out" not in (argv if argv is not None else sys.argv[1:]):
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
