"""Command-line frontend: ``grigrowth <subcommand> ...``.

Payloads go to stdout as JSON (default) or CSV, diagnostics to stderr.
Exit codes: 0 success, 1 domain error (including budget_exceeded), 2 usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Any

from .errors import BudgetExceeded
from .grigorchuk import ball, tilde_word_problem, word_problem
from .orbit import delta_realizer, inverted_orbit, schreier_ball, sigma_growth
from .sequences import OmegaParseError, parse_omega_spec
from .simplex import (PerronError, SimplexPoint, char_poly, eta, matrix_product, mu,
                      orbit, perron_vector, spectral_radius, weights)
from .synthesis import (REPORT_COLUMNS, SynthesisStall, check_doubling, growth_report,
                        preset_growth, synthesize_omega, verify_sandwich)
from .wreath import AbelianSpec, ball_W

DEFAULT_BUDGET = 10**6
SEARCH_BUDGET = 10**7


class DomainError(Exception):
    def __init__(self, message: str, payload: dict | None = None) -> None:
        super().__init__(message)
        self.payload = payload or {"error": message}


def _plain(x: Any) -> Any:
    """JSON-ready copy: exact rationals become "p/q" strings."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _point_text(p: SimplexPoint) -> list[str]:
    return [str(c) for c in p]


# --- argument types -------------------------------------------------------

def _omega(text: str):
    try:
        return parse_omega_spec(text)
    except (OmegaParseError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _point(text: str) -> SimplexPoint:
    if text in ("bary", "barycentre", "barycenter"):
        return SimplexPoint.barycentre()
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("--V takes 'bary' or three rationals b,g,d")
    try:
        return SimplexPoint(*(Fraction(p) for p in parts))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _letters(text: str) -> str:
    if not text or text.strip("012"):
        raise argparse.ArgumentTypeError(f"expected a nonempty word over 0, 1, 2: {text!r}")
    return text


def _gword(text: str) -> str:
    if text.strip("abcdABCD"):
        raise argparse.ArgumentTypeError(f"expected a word over a, b, c, d: {text!r}")
    return text


# --- commands -------------------------------------------------------------
# each returns (json payload, csv rows with header first)

def cmd_wp(args):
    # upper case marks inverses; in G every generator is an involution
    if args.tilde:
        trivial, depth = tilde_word_problem(args.word, args.omega, args.level)
    else:
        trivial, depth = word_problem(args.word.lower(), args.omega, args.level)
    out = {"trivial": trivial, "recursion_depth": depth}
    return out, [["trivial", "recursion_depth"], [trivial, depth]]


def cmd_eta(args):
    m = matrix_product(args.word)
    poly = char_poly(m)
    radius = spectral_radius(m, args.tol)
    k = len(args.word)
    eta_value = radius ** (1 / k)
    out = {"word": args.word, "matrix": [list(r) for r in m], "char_poly": list(poly),
           "spectral_radius": radius, "eta": eta_value,
           "alpha": math.log(2) / math.log(eta_value)}
    try:
        out["perron_vector"] = list(perron_vector(m, args.tol))
    except PerronError as exc:
        raise DomainError(str(exc), dict(out, error="not primitive")) from None
    rows = [["key", "value"]] + [[key, val if isinstance(val, (str, float)) else json.dumps(val)]
                                 for key, val in out.items()]
    return out, rows


def cmd_simplex_orbit(args):
    pts = orbit(args.V, args.word)
    rows = [["step", "beta", "gamma", "delta", "mu", "eta_next"]]
    out = []
    for i, p in enumerate(pts):
        nxt = eta(p, int(args.word[i])) if i < len(args.word) else None
        out.append({"step": i, "point": _point_text(p), "mu": mu(p), "eta_next": nxt})
        rows.append([i, *_point_text(p), str(mu(p)), "" if nxt is None else str(nxt)])
    return out, rows


def _target(text: str):
    try:
        float(text)
        text = "pow:" + text
    except ValueError:
        pass
    try:
        return preset_growth(text)
    except KeyError as exc:
        raise DomainError(str(exc.args[0])) from None


def _synth(args):
    g = _target(args.target)
    report = check_doubling(g, g.rmin, 1e300, args.samples, args.tol)
    if not report.ok:
        raise DomainError("doubling condition violated",
                          {"error": "doubling condition violated", "target": g.name,
                           "report": report.as_dict()})
    try:
        trace = synthesize_omega(g, args.V, args.len)
    except SynthesisStall as exc:
        raise DomainError(str(exc)) from None
    return g, trace


def cmd_synth(args):
    g, trace = _synth(args)
    lo, hi = verify_sandwich(trace, g, args.V)
    out = dict(trace.as_dict(), target=g.name, A_obs=lo, B_obs=hi,
               prefix="".join(map(str, trace.prefix.data)))
    rows = [["k", "kind", "ratio", "complete"]]
    rows += [[r.k, r.kind, repr(r.ratio), r.complete] for r in trace.records]
    return out, rows


def cmd_verify(args):
    g, trace = _synth(args)
    lo, hi = verify_sandwich(trace, g, args.V)
    bad = [r.as_dict() for r in trace.records[2:] if r.complete and not _phase_ok(r)]
    out = {"target": g.name, "A_obs": lo, "B_obs": hi, "phase_violations": bad,
           "ok": not bad}
    return out, [["target", "A_obs", "B_obs", "ok"], [g.name, repr(lo), repr(hi), not bad]]


def _phase_ok(rec, eps: float = 1e-9) -> bool:
    if rec.kind == "after-2-block":
        return -1 - eps <= rec.log2_ratio <= eps
    return -eps <= rec.log2_ratio <= math.log2(27) + eps


def cmd_ball(args):
    table = ball(args.omega, args.level, args.V, args.R, args.budget)
    entries = sorted(table.entries)
    out = {"radius": args.R, "count": table.count,
           "elements": [{"norm": n, "word": w} for n, w in entries]}
    return out, [["norm", "word"]] + [[str(n), w] for n, w in entries]


def cmd_wball(args):
    table = ball_W(args.omega, AbelianSpec(args.m), args.V, args.R, args.budget, args.mixed)
    out = {"radius": args.R, "count": table.count,
           "elements": [dict(x.to_json(), norm=n) for n, x in table.entries]}
    return out, [["norm", "support", "word"]] + [list(r) for r in table.to_csv_rows()]


def cmd_orbit(args):
    orb = inverted_orbit(args.word.lower(), args.omega, args.level)
    pts = orb.sorted_points()
    out = {"word": args.word, "size": orb.size, "points": pts}
    return out, [["point"]] + [[p] for p in pts]


def cmd_delta(args):
    size, word = delta_realizer(args.omega, args.V, args.R, args.budget, args.level)
    out = {"radius": args.R, "delta": size, "realizer": word,
           "realizer_norm": weights(args.V).word_norm(word)}
    return out, [["radius", "delta", "realizer"], [str(args.R), size, word]]


def cmd_sigma(args):
    n = sigma_growth(args.omega, args.V, args.R, args.budget, args.level)
    return {"radius": args.R, "sigma": n}, [["radius", "sigma"], [str(args.R), n]]


def cmd_schreier(args):
    verts, edges = schreier_ball(args.omega, args.radius, args.level)
    out = {"vertices": verts, "edges": [{"from": p, "gen": g, "to": q} for p, g, q in edges]}
    return out, [["from", "gen", "to"]] + [list(e) for e in edges]


def cmd_report(args):
    rows = growth_report(args.omega, args.V, args.kmax, args.budget,
                         with_w=not args.no_wreath, threads=args.threads)
    if args.plot:
        from .plotting import plot_report
        plot_report(rows, args.plot)
    table = [list(REPORT_COLUMNS)]
    for r in rows:
        table.append(["" if r[c] is None else str(r[c]) if isinstance(r[c], Fraction)
                      else r[c] for c in REPORT_COLUMNS])
    return rows, table


# --- parser ---------------------------------------------------------------

def _globals(suppress: bool) -> argparse.ArgumentParser:
    """Global flags, accepted before or after the subcommand."""
    p = argparse.ArgumentParser(add_help=False)
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("json", "csv"), default=dflt("json"))
    p.add_argument("--budget", type=int, default=dflt(None),
                   help="element / node budget for the exhaustive searches")
    p.add_argument("--threads", type=int, default=dflt(1))
    p.add_argument("--tol", type=float, default=dflt(1e-12))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grigrowth", parents=[_globals(False)],
                                     description=__doc__.splitlines()[0])
    common = _globals(True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    def omega_arg(p, level=True):
        p.add_argument("omega", type=_omega, help="per:012, exp:0120, syll:1,2;3,1, prog:sqrt (@k shifts)")
        if level:
            p.add_argument("--level", type=int, default=0)

    p = add("wp", cmd_wp, "decide whether a word is trivial")
    p.add_argument("--tilde", action="store_true", help="use the torsion-free group")
    omega_arg(p)
    p.add_argument("word", type=_gword)

    p = add("eta", cmd_eta, "spectral data of a periodic word")
    p.add_argument("word", type=_letters)

    p = add("simplex-orbit", cmd_simplex_orbit, "orbit of a simplex point")
    p.add_argument("word", type=_letters)
    p.add_argument("--V", type=_point, default=SimplexPoint.barycentre())

    for name, func, text in (("synth", cmd_synth, "greedy synthesis of omega"),
                             ("verify", cmd_verify, "check the sandwich bounds of a synthesis")):
        p = add(name, func, text)
        p.add_argument("target", help="pow:<alpha>, <alpha>, linear, r-over-log, "
                                      "r-over-loglog, ackermann-inverse")
        p.add_argument("--len", type=int, default=300)
        p.add_argument("--V", type=_point, default=SimplexPoint.barycentre())
        p.add_argument("--samples", type=int, default=400)

    for name, func, text in (("ball", cmd_ball, "ball in G"),
                             ("wball", cmd_wball, "ball in the wreath product"),
                             ("delta", cmd_delta, "largest inverted orbit within a radius"),
                             ("sigma", cmd_sigma, "number of inverted orbits within a radius")):
        p = add(name, func, text)
        omega_arg(p)
        p.add_argument("--V", type=_point, default=SimplexPoint.barycentre())
        p.add_argument("--R", type=_rational, required=True)
        if name == "wball":
            p.add_argument("--m", type=int, default=2, help="lamp group Z/m")
            p.add_argument("--mixed", action="store_true", help="{1,a,b,c,d} x A generators")

    p = add("orbit", cmd_orbit, "inverted orbit of a word")
    omega_arg(p)
    p.add_argument("--word", type=_gword, required=True)

    p = add("schreier", cmd_schreier, "Schreier graph around rho")
    omega_arg(p)
    p.add_argument("--radius", type=int, default=3)

    p = add("report", cmd_report, "growth table at the radii R_k")
    omega_arg(p, level=False)
    p.add_argument("--V", type=_point, default=SimplexPoint.barycentre())
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--no-wreath", action="store_true", help="skip the wreath product column")
    p.add_argument("--plot", metavar="PATH", help="also write a figure (needs matplotlib)")
    return parser


def _emit(payload, rows, fmt: str, stream) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\r\n").writerows(rows)
        stream.write(buf.getvalue())
    else:
        stream.write(json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget is None:
        args.budget = SEARCH_BUDGET if args.command in ("delta", "sigma") else DEFAULT_BUDGET
    if getattr(args, "R", 0) < 0:
        parser.error("--R must be >= 0")
    try:
        payload, rows = args.func(args)
    except BudgetExceeded as exc:
        print(str(exc), file=sys.stderr)
        _emit({"error": "budget_exceeded", "what": exc.what, "budget": exc.budget},
              [["error", "what", "budget"], ["budget_exceeded", exc.what, exc.budget]],
              args.format, sys.stdout)
        return 1
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit(exc.payload, [["error"], [str(exc)]], args.format, sys.stdout)
        return 1
    _emit(payload, rows, args.format, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
