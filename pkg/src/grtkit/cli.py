"""grtkrv command line: basis listings, BCH, equation checks, solvers, rho.

Exit codes: 0 pass, 1 an equation failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from pathlib import Path

from . import grtkrv as G
from .arrows import arrow_from_json, arrow_to_json, cap_to_json, CapElement
from .cyc import cyclic_from_json, onevar_from_json, onevar_to_json
from .freeseries import (LieSeries, SeriesError, TruncationContext, bch, format_terms,
                         lie_project, log, lyndon_basis, series_from_json, series_to_json,
                         standard_factor)
from .tder import taut_from_json, taut_to_json

DEFAULT_DEGREE = 6
HARD_CAP = 8
ENV_VAR = "GRTKRV_MAX_DEGREE"

CHECKS = ("grt", "krv", "kv", "solkv", "associator", "r4p", "up", "cp", "drinfeld",
          "eta-self", "anti-hom", "diagram")


class InputError(Exception):
    pass


def ceiling() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return DEFAULT_DEGREE
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"{ENV_VAR}={raw!r} is not an integer")
    if cap > HARD_CAP:
        warnings.warn(f"{ENV_VAR}={cap} exceeds the hard cap; using {HARD_CAP}")
        cap = HARD_CAP
    if cap < 2:
        raise InputError(f"{ENV_VAR} must be at least 2")
    return cap


def resolve_degree(requested: int | None) -> int:
    cap = ceiling()
    d = cap if requested is None else requested
    if d < 2:
        raise InputError("degree must be at least 2")
    if d > cap:
        raise InputError(f"degree {d} above the ceiling {cap} (raise it with {ENV_VAR})")
    if d > DEFAULT_DEGREE:
        warnings.warn(f"degree {d} is above {DEFAULT_DEGREE}; tder_4 checks get slow")
    return d


# ---------------------------------------------------------------- file I/O

def read_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}: {e.msg}")


def _loaded(path, fn, *args):
    try:
        return fn(read_json(path), *args)
    except (SeriesError, KeyError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"{path}: {e}")


def load_lie(path: str, N: int) -> LieSeries:
    a = _loaded(path, series_from_json, N)
    if not isinstance(a, LieSeries):
        if a.constant() != 1:
            raise InputError(f"{path}: expected a Lie series or a group-like series")
        a = lie_project(log(a))
    return a


def load_psi(path: str, N: int) -> LieSeries:
    psi = load_lie(path, N)
    if psi.ctx.n != 2:
        raise InputError(f"{path}: expected a series in two generators")
    return psi.in_ctx(TruncationContext(N, ("x", "y")))


def load_pair(path: str, N: int):
    obj = read_json(path)
    try:
        alpha = taut_from_json(obj["alpha"], N)
        s = onevar_from_json(obj["s"], N)
    except (SeriesError, KeyError, TypeError, ValueError) as e:
        raise InputError(f"{path}: {e}")
    return alpha, s


def load_automorphism(path: str, N: int):
    obj = read_json(path)
    try:
        Nv = arrow_from_json(obj["N"] if "N" in obj else obj, N)
        C = None
        if "C" in obj:
            c = obj["C"]
            C = CapElement(cyclic_from_json(c, TruncationContext(N, tuple(c.get("generators", ["x"])))))
    except (SeriesError, KeyError, TypeError, ValueError) as e:
        raise InputError(f"{path}: {e}")
    return Nv, C


def krv_to_json(pair) -> dict:
    return {"kind": "krv", "alpha": taut_to_json(pair.alpha), "s": onevar_to_json(pair.s)}


def automorphism_to_json(data) -> dict:
    return {"kind": "automorphism", "N": arrow_to_json(data.N), "C": cap_to_json(data.C)}


def dump(obj, out: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def emit_report(reports, fmt: str, out: str | None) -> int:
    reports = list(reports)
    ok = all(r.ok for r in reports)
    if fmt == "json":
        body = reports[0].to_json() if len(reports) == 1 else \
            {"status": "pass" if ok else "fail", "reports": [r.to_json() for r in reports]}
        dump(body, out)
    else:
        lines = []
        for r in reports:
            lines.append(f"{r.equation}: {r.status}")
            for f in r.failures[:10]:
                lines.append(f"  {f['part']} degree {f['degree']} {f['word']}: {f['residual']}")
            if len(r.failures) > 10:
                lines.append(f"  ... {len(r.failures) - 10} more")
        text = "\n".join(lines) + "\n"
        if out:
            Path(out).write_text(text)
        else:
            sys.stdout.write(text)
    return 0 if ok else 1


# ---------------------------------------------------------------- commands

def bracket_str(ctx, w) -> str:
    if len(w) == 1:
        return ctx.alphabet[w[0]]
    u, v = standard_factor(w)
    return f"[{bracket_str(ctx, u)},{bracket_str(ctx, v)}]"


def cmd_basis(args) -> int:
    if args.n < 1:
        raise InputError("--n must be positive")
    if args.degree is None or args.degree < 1:
        raise InputError("--degree must be positive")
    ctx = TruncationContext.letters(args.n, args.degree)
    words = lyndon_basis(ctx, args.degree)
    if args.format == "json":
        dump({"n": args.n, "degree": args.degree,
              "words": [ctx.word_str(w) for w in words]}, args.out)
    else:
        text = "".join(f"{ctx.word_str(w)}\t{bracket_str(ctx, w)}\n" for w in words)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    return 0


def cmd_bch(args) -> int:
    N = resolve_degree(args.degree)
    a, b = load_lie(args.a, N), load_lie(args.b, N)
    if a.ctx.alphabet != b.ctx.alphabet:
        raise InputError("the two series use different generators")
    c = bch(a, b.in_ctx(a.ctx))
    if args.format == "json":
        dump(series_to_json(c), args.out)
    else:
        text = format_terms(c.ctx, c.lyndon()) + "\n"
        Path(args.out).write_text(text) if args.out else sys.stdout.write(text)
    return 0


def _need(args, k):
    if len(args.inputs) != k:
        raise InputError(f"check {args.kind} takes {k} input file(s), got {len(args.inputs)}")


def cmd_check(args) -> int:
    N = resolve_degree(args.degree)
    kind, ins = args.kind, args.inputs
    if kind in ("grt", "drinfeld", "eta-self", "diagram", "associator"):
        _need(args, 1)
        psi = load_psi(ins[0], N)
        if kind == "grt":
            rep = G.check_grt(psi)
        elif kind == "associator":
            rep = G.check_associator(psi)
        elif kind == "drinfeld":
            rep = G.drinfeld_checks(psi)
        elif kind == "eta-self":
            rep = G.eta_self_action(psi)
        else:
            rep = G.diagram_check(psi)
        return emit_report([rep], args.format, args.out)
    if kind == "anti-hom":
        _need(args, 2)
        return emit_report([G.anti_hom_check(load_psi(ins[0], N), load_psi(ins[1], N))],
                           args.format, args.out)
    if kind in ("krv", "kv", "solkv"):
        _need(args, 1)
        alpha, s = load_pair(ins[0], N)
        if alpha.n != 2:
            raise InputError(f"{ins[0]}: expected a two-strand automorphism")
        if kind == "krv":
            rep = G.check_krv(G.KrvPair(alpha, s))
        elif kind == "kv":
            rep = G.check_kv(G.KvPair(alpha, s))
        else:
            rep = G.check_solkv(alpha, s)
        return emit_report([rep], args.format, args.out)
    _need(args, 1)
    Nv, C = load_automorphism(ins[0], N)
    if Nv.n != 2:
        raise InputError(f"{ins[0]}: expected a two-strand vertex value")
    if kind == "r4p":
        rep = G.check_R4p(Nv)
    elif kind == "up":
        rep = G.check_Up(Nv)
    else:
        if C is None:
            raise InputError(f"{ins[0]}: check cp needs a cap value C")
        rep = G.check_Cp(Nv, C)
    return emit_report([rep], args.format, args.out)


def cmd_solve(args) -> int:
    if args.kind == "grt-dim":
        top = args.max if args.max is not None else args.degree
        top = resolve_degree(top)
        rows = []
        for d in range(2, top + 1):
            basis = G.solve_grt_degree(d)
            rows.append({"degree": d, "dimension": len(basis),
                         "basis": [series_to_json(b) for b in basis]})
        if args.format == "json":
            dump({"kind": "grt-dimensions", "degrees": rows}, args.out)
        else:
            lines = ["degree  dim"] + [f"{r['degree']:>6}  {r['dimension']}" for r in rows]
            for r in rows:
                for b in r["basis"]:
                    lines.append(f"  d={r['degree']}: " + " + ".join(
                        f"{t['coeff']}*{t['word']}" for t in b["terms"]))
            text = "\n".join(lines) + "\n"
            Path(args.out).write_text(text) if args.out else sys.stdout.write(text)
        return 0
    d = resolve_degree(args.degree if args.degree is not None else args.max)
    try:
        phi = G.solve_associator(d)
    except G.UnsolvableAtDegree as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    logphi = lie_project(log(phi))
    if args.format == "json":
        dump(series_to_json(logphi), args.out)
    else:
        text = f"log Phi through degree {d}:\n{format_terms(logphi.ctx, logphi.lyndon())}\n"
        Path(args.out).write_text(text) if args.out else sys.stdout.write(text)
    return 0


def _require_grt(psi, path) -> int | None:
    rep = G.check_grt(psi)
    if not rep.ok:
        f = rep.first()
        sys.stderr.write(f"{path}: not in GRT1 ({f['part']} degree {f['degree']} "
                         f"{f['word']}: {f['residual']})\n")
        return 1
    return None


def cmd_rho(args) -> int:
    N = resolve_degree(args.degree)
    psi = load_psi(args.psi, N)
    bad = _require_grt(psi, args.psi)
    if bad:
        return bad
    try:
        pair = G.rho(psi)
    except G.DufloNotSolvable as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    rep = G.check_krv(pair)
    if not rep.ok:
        sys.stderr.write("error: rho output fails the KRV check; nothing written\n")
        return emit_report([rep], "text", None) or 1
    dump(krv_to_json(pair), args.out)
    return 0


def cmd_rho_ring(args) -> int:
    N = resolve_degree(args.degree)
    psi = load_psi(args.psi, N)
    bad = _require_grt(psi, args.psi)
    if bad:
        return bad
    try:
        data = G.rho_ring(psi)
    except G.DufloNotSolvable as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    rep = G.check_automorphism(data)
    if not rep.ok:
        sys.stderr.write("error: vertex value fails R4'/U'/C'; nothing written\n")
        return emit_report([rep], "text", None) or 1
    dump(automorphism_to_json(data), args.out)
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree", type=int, default=None,
                        help=f"truncation degree (default {ENV_VAR} or {DEFAULT_DEGREE})")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", default=None, help="write output to FILE")

    p = argparse.ArgumentParser(prog="grtkrv", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("basis", parents=[common], help="Lyndon basis of the free Lie algebra")
    b.add_argument("--n", type=int, default=2)
    b.set_defaults(func=cmd_basis)

    h = sub.add_parser("bch", parents=[common], help="bch(a, b) of two series files")
    h.add_argument("a")
    h.add_argument("b")
    h.set_defaults(func=cmd_bch)

    c = sub.add_parser("check", parents=[common], help="run an equation checker")
    c.add_argument("kind", choices=CHECKS)
    c.add_argument("inputs", nargs="+")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("solve", parents=[common], help="degree-by-degree solvers")
    s.add_argument("kind", choices=("grt-dim", "associator"))
    s.add_argument("--max", type=int, default=None, help="top degree (alias of --degree)")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("rho", parents=[common], help="KRV pair of a GRT1 element")
    r.add_argument("psi")
    r.set_defaults(func=cmd_rho)

    rr = sub.add_parser("rho-ring", parents=[common], help="vertex value (N, C) of a GRT1 element")
    rr.add_argument("psi")
    rr.set_defaults(func=cmd_rho_ring)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    warnings.simplefilter("always")
    warnings.showwarning = lambda msg, *a, **k: sys.stderr.write(f"warning: {msg}\n")
    try:
        return args.func(args)
    except InputError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except SeriesError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
