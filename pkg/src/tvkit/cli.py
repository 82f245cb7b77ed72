"""Command-line entry point: ``tvkit <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys

import mpmath

from .cyclotomic import DEFAULT_PRECISION, CyclotomicError, QContext, format_cyc
from .polytab import (REFERENCE_ROWS, T_POLY, check_qint_identities, root_assignment,
                      th_polynomial_report)
from .sixj import SixJError, inadmissible_triples, sixj
from .statesum import (EnumerationBudgetExceeded, StateSumOptions, TriangulationError, edge_classes,
                       even_filter, read_triangulation, state_sum)
from .systems import (PATTERNS, SystemDataError, export_system, global_flip, named_system,
                      verify_relation)

CONVENTIONS = {
    "default": ("squares", 1),
    "alt-N": ("linear", 1),
    "edge-squared": ("squares", 2),
}


def _default_precision() -> int:
    env = os.environ.get("TVKIT_PRECISION")
    return int(env) if env else DEFAULT_PRECISION


class _Out:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, text: str, **record):
        if self.fmt == "json-lines":
            print(json.dumps(record, sort_keys=True), file=self.stream)
        else:
            print(text, file=self.stream)


def _clean(x, precision: int):
    """Drop real or imaginary parts that are embedding noise."""
    x = mpmath.mpc(x)
    tol = mpmath.mpf(10) ** (-(precision // 2))
    re = x.real if abs(x.real) > tol else mpmath.mpf(0)
    im = x.imag if abs(x.imag) > tol else mpmath.mpf(0)
    return mpmath.mpc(re, im)


def _num(x, digits: int) -> str:
    x = mpmath.mpc(x)
    if x.imag == 0:
        return mpmath.nstr(x.real, digits)
    return mpmath.nstr(x, digits)


def _digits(args) -> int:
    return min(args.digits, args.precision)


# --- subcommands ---

def cmd_sixj(args, out: _Out) -> int:
    ctx = QContext(args.r, args.m, args.precision)
    key = tuple(args.colours)
    bad = inadmissible_triples(args.r, key)
    v = sixj(ctx, *key, flip=args.flip)
    label = "<{} {} {} | {} {} {}>".format(*key)
    if v.is_zero():
        reason = (f"inadmissible triple ({','.join(map(str, bad[0]))})" if bad
                  else "the defining sum vanishes")
        out.emit(f"{label} = 0  ({reason})", symbol=list(key), r=args.r, m=args.m, value="0",
                 zero=True, inadmissible=[list(t) for t in bad])
        return 0
    value = _clean(v.embed(args.precision), args.precision)
    d = _digits(args)
    phase = ["1", "i", "-1", "-i"][v.phase]
    out.emit("\n".join([
        f"{label}  r={args.r} m={args.m} (z = zeta_{2 * args.r})",
        f"  phase    {phase}",
        f"  radicand {format_cyc(v.radicand)}",
        f"  factor   {format_cyc(v.factor)}",
        f"  square   {format_cyc(v.squared())}",
        f"  value    {_num(value, d)}",
    ]), symbol=list(key), r=args.r, m=args.m, phase=phase, radicand=format_cyc(v.radicand),
        factor=format_cyc(v.factor), square=format_cyc(v.squared()),
        re=mpmath.nstr(value.real, d), im=mpmath.nstr(value.imag, d), zero=False)
    return 0


def cmd_verify(args, out: _Out) -> int:
    ok = True
    run_identities = args.identities or not args.relation
    if run_identities:
        if args.r != 7:
            raise SystemExit("--identities applies to r = 7")
        ctx = QContext(7, args.m, args.precision)
        for name, passed in check_qint_identities(ctx):
            ok &= passed
            out.emit(f"{'PASS' if passed else 'FAIL'}  {name}  (m={args.m}, exact)",
                     check="identity", name=name, m=args.m, passed=passed)
        passed = T_POLY(ctx.qint(3)).is_zero()
        ok &= passed
        out.emit(f"{'PASS' if passed else 'FAIL'}  T([3]) = 0  (m={args.m}, exact)",
                 check="t_root", m=args.m, passed=passed)
    for name in args.relation or ():
        system = named_system(name, args.m, args.precision)
        rep = verify_relation(system, mpmath.mpf(args.tolerance), pattern=args.pattern)
        ok &= rep.passed
        worst = mpmath.nstr(rep.max_residual, 3)
        text = (f"{'PASS' if rep.passed else 'FAIL'}  relation {name} [{rep.pattern}]: "
                f"{rep.total} tuples, max residual {worst}")
        if not rep.passed:
            text += f", {len(rep.failures)} failures, worst tuple {rep.worst_tuple}"
        out.emit(text, check="relation", system=name, pattern=rep.pattern, tuples=rep.total,
                 max_residual=worst, failures=len(rep.failures),
                 worst_tuple=list(rep.worst_tuple) if rep.worst_tuple else None, passed=rep.passed)
    return 0 if ok else 1


def cmd_statesum(args, out: _Out) -> int:
    tri = read_triangulation(args.file)
    system = named_system(args.system, args.m, args.precision)
    if args.flip:
        system = global_flip(system)
    normalization, p = CONVENTIONS[args.convention]
    opts = StateSumOptions(normalization=normalization, edge_exponent=p,
                           colour_filter=even_filter() if args.even else None,
                           threads=args.threads, cap=args.cap)
    value = _clean(state_sum(tri, system, opts), args.precision)
    table = edge_classes(tri)
    d = _digits(args)
    out.emit(f"{args.file}  {args.system}  {_num(value, d)}", file=args.file, system=args.system,
             tets=tri.tets, edges=table.edge_count, vertices=table.vertex_count,
             convention=args.convention, even=args.even,
             re=mpmath.nstr(value.real, d), im=mpmath.nstr(value.imag, d))
    return 0


def cmd_polytable(args, out: _Out) -> int:
    ok = True
    rows = []
    for order in range(3, args.max_order + 1):
        rep = th_polynomial_report(2 * order - 1)
        rows.append((order, rep))
    width = max(len(str(rep.poly)) for _, rep in rows)
    for order, rep in rows:
        printed = REFERENCE_ROWS.get(order)
        match = None if printed is None else printed == rep.poly.coeffs
        ok &= match is not False
        tag = {True: "matches reference row", False: "DIFFERS from reference row", None: ""}[match]
        if not rep.squarefree:
            tag += " (repeated roots)"
        out.emit(f"TH_{order:<3} r={2 * order - 1:<3} {str(rep.poly):<{width}}  {tag}".rstrip(),
                 order=order, r=2 * order - 1, coeffs=list(rep.poly.coeffs),
                 matches_table=match, squarefree=rep.squarefree)
    return 0 if ok else 1


def cmd_roots(args, out: _Out) -> int:
    table = root_assignment(args.r, args.precision)
    d = min(_digits(args), 20)
    for m, k in table:
        v = QContext(args.r, m, args.precision).qint(3).embed(args.precision)
        angle = mpmath.mpf(180) * m / args.r
        out.emit(f"m={m:<3} angle={mpmath.nstr(angle, 6):>9} deg  [3]={mpmath.nstr(v.real, d):>24}  gamma_{k}",
                 m=m, angle_deg=mpmath.nstr(angle, 10), value=mpmath.nstr(v.real, d), root=k)
    return 0


def cmd_export(args, out: _Out) -> int:
    doc = export_system(named_system(args.system, args.m, args.precision))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(doc)
    else:
        sys.stdout.write(doc)
    return 0


# --- parser ---

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-r", type=int, default=7, help="invariant order r (default 7)")
    common.add_argument("-m", type=int, default=1, help="root selector: q = zeta_2r^m (default 1)")
    common.add_argument("--precision", type=int, default=_default_precision(),
                        help="decimal digits (default 100, or $TVKIT_PRECISION)")
    common.add_argument("--tolerance", default="1e-50", help="numeric tolerance (default 1e-50)")
    common.add_argument("--digits", type=int, default=30, help="digits printed for numeric values")
    common.add_argument("--format", choices=("text", "json-lines"), default="text")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    ap = argparse.ArgumentParser(prog="tvkit", description="Quantum 6j-symbols and Turaev-Viro type invariants.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sixj", parents=[common], help="evaluate one 6j symbol")
    p.add_argument("colours", type=int, nargs=6, metavar="c")
    p.add_argument("--flip", action="store_true", help="use the negated Delta roots")
    p.set_defaults(func=cmd_sixj)

    p = sub.add_parser("verify", parents=[common], help="exact identities and the defining relation")
    p.add_argument("--identities", action="store_true", help="quantum-integer identities and T([3]) = 0")
    p.add_argument("--relation", action="append", metavar="SYSTEM",
                   help="sweep the defining relation for a named system (repeatable)")
    p.add_argument("--pattern", choices=PATTERNS, default="book",
                   help="index pattern of the relation's right-hand side (default book)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("statesum", parents=[common], help="state sum of a .tri triangulation")
    p.add_argument("file")
    p.add_argument("--system", default="gamma:1", help="tv:R, th:R, epsilon[:-1], gamma:K or trivial")
    p.add_argument("--convention", choices=tuple(CONVENTIONS), default="default")
    p.add_argument("--even", action="store_true", help="restrict to even colours")
    p.add_argument("--flip", action="store_true", help="apply the global Delta sign flip")
    p.add_argument("--cap", type=int, default=10 ** 8, help="enumeration node budget")
    p.set_defaults(func=cmd_statesum)

    p = sub.add_parser("polytable", parents=[common], help="polynomials with roots the values of [3]_r")
    p.add_argument("--max-order", type=int, default=11)
    p.set_defaults(func=cmd_polytable)

    p = sub.add_parser("roots", parents=[common], help="which root of the polynomial each q gives")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("export", parents=[common], help="write a 6j system as JSON")
    p.add_argument("--system", default="gamma:1")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = _Out(args.format)
    try:
        with mpmath.workdps(args.precision + 10):
            return args.func(args, out)
    except (CyclotomicError, SixJError, SystemDataError, TriangulationError,
            EnumerationBudgetExceeded, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
