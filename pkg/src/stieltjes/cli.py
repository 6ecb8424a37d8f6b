"""stieltjes: exact values, asymptotics, sign queries, checks and figure data.

Examples
--------
  stieltjes exact --n 0..10 --digits 50
  stieltjes asy --n 20..200 --variant both
  stieltjes sign --n 10^10000
  stieltjes verify nr --k 5 --epsilon 1/32
  stieltjes figure 6 --format svg --output fig6.svg

Exit codes: 0 success, 2 invalid input, 3 uncertified or unconverged result,
4 two computations of the same quantity disagree.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import mpmath
from mpmath import mp

from . import svg
from .asymptotics import (
    CONVENTIONS,
    gamma_asymptotic,
    gamma_asymptotic_refined,
    parse_n_spec,
    sign_gamma,
)
from .finite_diff import DEFAULT_EPSILON, gamma_exact_many
from .mp_core import ConsistencyError, DomainError, NumericalError, PrecisionContext
from .norlund_rice import residue_at_zero, verification_report
from .saddle import saddle_for_n

EXIT_OK, EXIT_INPUT, EXIT_UNCERTIFIED, EXIT_CONSISTENCY = 0, 2, 3, 4

FIGURE_DEFAULTS = {"1": "0..150", "6": "1..250", "7": "1..200", "8": "3000..3300"}

log = logging.getLogger("stieltjes")


class InputError(ValueError):
    pass


class Uncertified(Exception):
    def __init__(self, message, text=None):
        super().__init__(message)
        self.text = text


def parse_range(text: str) -> list[int]:
    """"5", "0..10", "1,3,7..9" -> sorted list of distinct integers."""
    out = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                a, b = part.split("..", 1)
                lo, hi = int(a), int(b)
                if hi < lo:
                    raise InputError(f"empty range {part!r}")
                out.update(range(lo, hi + 1))
            else:
                out.add(int(part))
        except ValueError as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"bad n specification {part!r}") from exc
    if not out:
        raise InputError("no n given")
    return sorted(out)


def parse_epsilon(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"epsilon must be a rational like 1/32, got {text!r}") from exc
    if not 0 < eps < 1:
        raise InputError("epsilon must lie in (0, 1)")
    return eps


@dataclass
class RunConfig:
    command: str
    ns: list = field(default_factory=list)
    epsilon: Fraction = DEFAULT_EPSILON
    digits: int = 30
    k_max: Optional[int] = None
    output: str = "csv"
    output_path: Optional[str] = None
    jobs: int = 1

    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.digits)


def _num(x, digits=20) -> str:
    return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=-5, max_fixed=5)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pmap(fn: Callable, items, jobs: int):
    # order of results follows the input regardless of completion order
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ---------- exact ----------

def cmd_exact(cfg: RunConfig) -> str:
    results = gamma_exact_many(cfg.ns, cfg.epsilon, cfg.k_max, cfg.ctx())
    rows = [
        {
            "n": r.n,
            "value": r.decimal(cfg.digits),
            "digits_certified": min(r.digits_certified, cfg.digits) if r.certified else r.digits_certified,
            "certified": r.certified,
            "epsilon": str(r.epsilon),
            "k_max": r.k_truncation,
            "note": r.note,
        }
        for r in results
    ]
    if cfg.output == "json":
        text = _json(rows)
    else:
        keys = ["n", "value", "digits_certified", "certified", "epsilon", "k_max", "note"]
        text = _csv(keys, [[row[k] for k in keys] for row in rows])
    bad = [r.n for r in results if not r.certified]
    if bad:
        raise Uncertified(f"uncertified n: {bad}", text)
    return text


# ---------- asy ----------

def _asy_row(args):
    n, digits, variant = args
    ctx = PrecisionContext(digits)
    out = [n]
    fns = {"full": gamma_asymptotic, "refined": gamma_asymptotic_refined}
    for v in (["full", "refined"] if variant == "both" else [variant]):
        est = fns[v](n, ctx)
        out += [_num(est.value, 20), _num(est.log10_abs, 12), est.sign, CONVENTIONS[v]]
    return out


def cmd_asy(cfg: RunConfig, variant: str = "full") -> str:
    if cfg.ns[0] < 1:
        raise InputError("asymptotic formulas need n >= 1")
    rows = _pmap(_asy_row, [(n, cfg.digits, variant) for n in cfg.ns], cfg.jobs)
    header = ["n"]
    for v in (["full", "refined"] if variant == "both" else [variant]):
        header += [f"value_{v}", f"log10_abs_{v}", f"sign_{v}", f"convention_{v}"]
    return _csv(header, rows)


# ---------- sign ----------

def cmd_sign(spec: str, digits: int) -> str:
    try:
        n = parse_n_spec(spec)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    try:
        res = sign_gamma(n, PrecisionContext(digits))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    text = _json(res.as_dict())
    if not res.certified:
        raise Uncertified(f"sign of gamma_{spec} not certified", text)
    return text


# ---------- verify ----------

def cmd_verify(kind: str, k: int, epsilon: Fraction, digits: int, abscissa: Fraction, line_tol: str) -> str:
    if k < 0:
        raise InputError("k must be >= 0")
    ctx = PrecisionContext(digits)
    if kind == "residue":
        r = residue_at_zero(k, epsilon, ctx)
        with ctx.workdps():
            err = abs(r.numeric - r.closed_form)
            report = {
                "k": k,
                "epsilon": str(epsilon),
                "kind": "residue",
                "sum_value": _num(r.closed_form, digits),
                "integral_value": _num(r.numeric, digits),
                "abs_error": mpmath.nstr(err, 5),
                "rel_error": mpmath.nstr(err / abs(r.closed_form), 5),
                "tail_bound": "0",
            }
        return _json(report)
    if kind == "nr":
        report = verification_report(k, epsilon, "rectangle", ctx)
        limit = mpmath.mpf(10) ** (-digits)
    else:
        if abscissa == 0 or abscissa <= -1:
            raise InputError("abscissa must be > 0 or in (-1, 0)")
        report = verification_report(k, epsilon, "vertical_line", ctx, abscissa, mpmath.mpf(line_tol))
        limit = mpmath.mpf(line_tol) + mpmath.mpf(report["tail_bound"]) / abs(mpmath.mpf(report["sum_value"]))
    text = _json(report)
    if mpmath.mpf(report["rel_error"]) > limit:
        exc = ConsistencyError(f"relative error {report['rel_error']} exceeds {mpmath.nstr(limit, 3)}")
        exc.text = text
        raise exc
    return text


# ---------- figures ----------

def _fig6_row(args):
    n, digits = args
    ctx = PrecisionContext(digits)
    rows = []
    for branch in ("plus", "minus"):
        s = saddle_for_n(n, branch, ctx).location
        rows.append([n, branch, _num(s.real, 20), _num(s.imag, 20)])
    return rows


def _fig7_asy(args):
    n, digits = args
    return gamma_asymptotic(n, PrecisionContext(digits)).value


def cmd_figure(which: str, cfg: RunConfig):
    """Returns (header, rows, svg_series, axis labels)."""
    if which == "1":
        res = gamma_exact_many(cfg.ns, cfg.epsilon, cfg.k_max, cfg.ctx())
        rows = [[r.n, _num(mpmath.log10(abs(r.value)), 12), int(mpmath.sign(r.value))] for r in res]
        series = [
            svg.Series("positive", "green", [(r[0], float(r[1])) for r in rows if r[2] > 0]),
            svg.Series("negative", "red", [(r[0], float(r[1])) for r in rows if r[2] < 0]),
        ]
        _require_certified(res)
        return ["n", "log10_abs_gamma", "sign"], rows, series, ("n", "log10 |gamma_n|")
    if which == "6":
        if cfg.ns[0] < 1:
            raise InputError("saddles need n >= 1")
        chunks = _pmap(_fig6_row, [(n, cfg.digits) for n in cfg.ns], cfg.jobs)
        rows = [row for chunk in chunks for row in chunk]
        series = [
            svg.Series(b, c, [(float(r[2]), float(r[3])) for r in rows if r[1] == b])
            for b, c in (("plus", "blue"), ("minus", "orange"))
        ]
        return ["n", "branch", "re_s", "im_s"], rows, series, ("Re s_n", "Im s_n")
    if which in ("7", "8"):
        if cfg.ns[0] < 1:
            raise InputError("asymptotic formulas need n >= 1")
        exact = gamma_exact_many(cfg.ns, cfg.epsilon, cfg.k_max, cfg.ctx())
        asy = _pmap(_fig7_asy, [(n, cfg.digits) for n in cfg.ns], cfg.jobs)
        _require_certified(exact)
        with mp.workdps(cfg.digits):
            if which == "7":
                rows = [
                    [r.n, _num(mpmath.log10(abs(r.value)), 12), _num(mpmath.log10(abs(a)), 12)]
                    for r, a in zip(exact, asy)
                ]
                series = [
                    svg.Series("exact", "green", [(r[0], float(r[1])) for r in rows]),
                    svg.Series("asymptotic", "red", [(r[0], float(r[2])) for r in rows]),
                ]
                return ["n", "log10_abs_exact", "log10_abs_asy"], rows, series, ("n", "log10 |gamma_n|")
            rows = [[r.n, _num(r.value / a, 15)] for r, a in zip(exact, asy)]
            series = [
                svg.Series("exact/asymptotic", "blue", [(r[0], float(r[1])) for r in rows]),
                svg.Series("1", "red", [(rows[0][0], 1.0), (rows[-1][0], 1.0)], line=True),
            ]
            return ["n", "ratio"], rows, series, ("n", "ratio")
    raise InputError(f"unknown figure {which!r}")


def _require_certified(results):
    bad = [r.n for r in results if not r.certified]
    if bad:
        raise Uncertified(f"uncertified exact values for n: {bad}")


# ---------- argument parsing ----------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stieltjes", description="Stieltjes constants: exact and asymptotic.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n_required=True, digits=30):
        sp.add_argument("--n", required=n_required, help="n, a..b or a comma list")
        sp.add_argument("--digits", type=int, default=digits)
        sp.add_argument("--output", dest="output_path", help="write here instead of stdout")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for range commands")

    sp = sub.add_parser("exact", help="certified gamma_n by finite differences")
    common(sp)
    sp.add_argument("--epsilon", default=str(DEFAULT_EPSILON))
    sp.add_argument("--k-max", type=int)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")

    sp = sub.add_parser("asy", help="asymptotic gamma_n")
    common(sp)
    sp.add_argument("--variant", choices=["full", "refined", "both"], default="full")

    sp = sub.add_parser("sign", help="sign of gamma_n for huge n (10^M accepted)")
    sp.add_argument("--n", required=True)
    sp.add_argument("--digits", type=int, default=30)
    sp.add_argument("--output", dest="output_path")

    sp = sub.add_parser("verify", help="contour-integral checks of a_k")
    sp.add_argument("kind", choices=["nr", "residue", "line"])
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--epsilon", default=str(DEFAULT_EPSILON))
    sp.add_argument("--digits", type=int, default=25)
    sp.add_argument("--abscissa", default="1/2")
    sp.add_argument("--line-tol", default="1e-12", help="relative tolerance for the vertical line")
    sp.add_argument("--output", dest="output_path")

    sp = sub.add_parser("figure", help="figure data as CSV (or SVG)")
    sp.add_argument("which", choices=sorted(FIGURE_DEFAULTS))
    common(sp, n_required=False, digits=20)
    sp.add_argument("--epsilon", default=str(DEFAULT_EPSILON))
    sp.add_argument("--k-max", type=int)
    sp.add_argument("--format", choices=["csv", "svg"], default="csv")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if getattr(args, "digits", 30) < 20:
            raise InputError("--digits must be at least 20")
        if args.command == "exact":
            cfg = RunConfig("exact", parse_range(args.n), parse_epsilon(args.epsilon), args.digits,
                            args.k_max, args.format, args.output_path, args.jobs)
            if cfg.ns[0] < 0:
                raise InputError("n must be >= 0")
            text = cmd_exact(cfg)
        elif args.command == "asy":
            cfg = RunConfig("asy", parse_range(args.n), digits=args.digits, jobs=args.jobs)
            text = cmd_asy(cfg, args.variant)
        elif args.command == "sign":
            text = cmd_sign(args.n, args.digits)
        elif args.command == "verify":
            text = cmd_verify(args.kind, args.k, parse_epsilon(args.epsilon), args.digits,
                              Fraction(args.abscissa), args.line_tol)
        else:
            ns = parse_range(args.n or FIGURE_DEFAULTS[args.which])
            cfg = RunConfig("figure", ns, parse_epsilon(args.epsilon), args.digits, args.k_max,
                            args.format, args.output_path, args.jobs)
            header, rows, series, (xl, yl) = cmd_figure(args.which, cfg)
            if args.format == "svg":
                text = svg.render(series, f"Figure {args.which}", xl, yl)
            else:
                text = _csv(header, rows)
        _emit(text, args.output_path)
        return EXIT_OK
    except (InputError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    except Uncertified as exc:
        if exc.text:
            _emit(exc.text, args.output_path)
        print(f"uncertified: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    except ConsistencyError as exc:
        if getattr(exc, "text", None):
            _emit(exc.text, args.output_path)
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
