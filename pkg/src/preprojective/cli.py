"""Command-line front end.

Every subcommand prints a human-readable report followed by ``#key:value``
trailer lines, one per metric, that are identical across runs on identical
input.  Exit status: 0 when everything checked passes, 1 on a failed check
or computational error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .acceptance import check_names, run
from .algebra import ParseError, format_poly, parse
from .domains import DomainError, parse_domain
from .groebner import GroebnerError, buchberger, corrected_space_dims
from .hh0 import hh0_field, hh0_integers
from .morphism import (
    MorphismError,
    apply,
    denominator_primes,
    is_unitriangular,
    paper_iso,
    parse_map,
    verify_descends,
)
from .presentation import build_presentation
from .quiver import QuiverError, double, load_quiver

OUTPUT_ENV = "PREPROJECTIVE_OUTPUT_DIR"


class UsageError(Exception):
    pass


def _domain(spec):
    try:
        return parse_domain(spec)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _presentation(args, kind):
    try:
        q, order = load_quiver(args.quiver)
    except OSError as exc:
        raise UsageError(f"cannot read quiver: {exc}") from exc
    try:
        return build_presentation(q, kind, _domain(args.field), order)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _dims_trailer(basis):
    return "#dims:" + ",".join(f"{d}:{n}" for d, n in sorted(basis.graded_dims.items()))


# ---------------------------------------------------------------------------
# subcommands


def cmd_gb(args, out):
    pres = _presentation(args, args.relations)
    gb = buchberger(pres, cap=args.max_degree)
    for g in gb.elements():
        out(format_poly(g))
    out(f"#complete:{'true' if gb.complete else 'false'}")
    out(f"#elements:{len(gb)}")
    if gb.complete:
        out(_dims_trailer(gb.basis()))
    else:
        out(_dims_trailer(gb.basis(args.max_degree)))
    return 0


def _nf(args):
    pres = _presentation(args, args.relations)
    gb = buchberger(pres)
    if not gb.complete:
        raise GroebnerError("Groebner basis is incomplete; raise --max-degree")
    p = parse(args.poly, pres.doubled, pres.domain, pres.macros)
    return gb.normal_form(p)


def cmd_nf(args, out):
    nf = _nf(args)
    out(format_poly(nf))
    out(f"#zero:{'false' if nf else 'true'}")
    out(f"#terms:{len(nf.terms)}")
    return 0


def cmd_member(args, out):
    nf = _nf(args)
    member = not nf
    out("member" if member else f"not a member; normal form {format_poly(nf)}")
    out(f"#member:{'true' if member else 'false'}")
    return 0


def cmd_hh0(args, out):
    pres = _presentation(args, args.algebra)
    if pres.domain.is_field:
        rep = hh0_field(pres)
    else:
        primes = [int(p) for p in args.primes.split(",")] if args.primes else None
        rep = hh0_integers(pres, primes=primes)
    out(rep.table())
    out(f"#method:{rep.method}")
    out(f"#total:{rep.total}")
    out(f"#filtered:{'true' if rep.filtered else 'false'}")
    for d, v in sorted(rep.graded_dims.items(), key=lambda t: str(t[0]).zfill(6)):
        if isinstance(v, tuple):
            tors = ";".join(f"{p}^{c}" for p, c in sorted(v[1].items())) or "-"
            out(f"#rank.{d}:{v[0]}")
            out(f"#torsion.{d}:{tors}")
        else:
            out(f"#dim.{d}:{v}")
    for d, ex in sorted(rep.torsion_exponents.items(), key=lambda t: str(t[0]).zfill(6)):
        out(f"#exponents.{d}:{','.join(map(str, ex))}")
    return 0


def cmd_dims(args, out):
    pres = _presentation(args, "add")
    gb = buchberger(pres)
    n, m = corrected_space_dims(gb, twisted=args.twisted)
    out(f"N={n} M={m}")
    out(f"#N:{n}")
    out(f"#M:{m}")
    return 0


def cmd_verify(args, out):
    try:
        table = paper_iso(args.paper, spelling=args.spelling)
    except MorphismError as exc:
        raise UsageError(str(exc)) from exc
    dom = _domain(args.field)
    q = table.quiver
    try:
        images = table.images if dom.modulus == 0 and dom.is_field else table.images.with_domain(dom)
    except DomainError as exc:
        out(f"FAIL load           {table.name} over {dom}: {exc}")
        out("#load:fail")
        out("#status:fail")
        return 1
    source = build_presentation(q, "mult", dom)
    gb = buchberger(build_presentation(q, "add", dom))
    cert = verify_descends(images, source, gb)
    uni = is_unitriangular(images, gb)
    primes = denominator_primes(table.images)
    denom_ok = primes <= table.bad_primes
    steps = [
        ("load", True, f"{table.name}: {len(table.images.images)} arrow images"),
        ("descends", bool(cert), cert.summary()),
        ("unitriangular", uni, "each arrow goes to itself plus longer paths" if uni else "leading terms differ"),
        ("denominators", denom_ok, f"primes {sorted(primes)} within bad primes {sorted(table.bad_primes)}"),
    ]
    for name, ok, msg in steps:
        out(f"{'PASS' if ok else 'FAIL'} {name:14} {msg}")
    for name, ok, _ in steps:
        out(f"#{name}:{'pass' if ok else 'fail'}")
    out(f"#truncation:{cert.truncation}")
    ok = all(s[1] for s in steps)
    out(f"#status:{'pass' if ok else 'fail'}")
    return 0 if ok else 1


def cmd_apply(args, out):
    q, order = load_quiver(args.quiver)
    dq = double(q, order)
    dom = _domain(args.field)
    try:
        text = Path(args.map).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read map: {exc}") from exc
    m = parse_map(text, dq, dq, dom)
    pres = build_presentation(dq, "add", dom)
    p = parse(args.poly, dq, dom, pres.macros)
    img = apply(m, p)
    if args.reduce:
        gb = buchberger(build_presentation(dq, args.reduce, dom))
        img = gb.normal_form(img)
    out(format_poly(img))
    out(f"#terms:{len(img.terms)}")
    return 0


def cmd_reproduce(args, out):
    only = None
    if args.only:
        only = [t for part in args.only for t in part.split(",") if t]
        unknown = [t for t in only if not any(n == t or n.startswith(t) for n in check_names())]
        if unknown:
            raise UsageError(f"unknown check(s) {unknown}; choose from {check_names()}")
    field = _domain(args.field) if args.field else None
    lines = []

    def both(line):
        lines.append(line)
        out(line)

    report = run(only=only, field=field, stream=both, verbose=not args.quiet)
    for t in report.trailers():
        both(t)
    outdir = args.output_dir or os.environ.get(OUTPUT_ENV)
    if outdir:
        path = Path(outdir)
        path.mkdir(parents=True, exist_ok=True)
        (path / "reproduce-paper.txt").write_text("\n".join(lines) + "\n")
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# argument parsing


def _add_quiver(p, relations=True):
    p.add_argument("--quiver", required=True, help="builtin:<A|D|E><n> or a quiver file")
    p.add_argument("--field", default="Q", help="coefficients: Q, Z, Fp:<p> or F<p> (default Q)")
    if relations:
        p.add_argument(
            "--relations",
            default="add",
            help="add, mult, partial:<vertex> or partial-mult:<vertex> (default add)",
        )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="preprojective",
        description="Exact computations with additive and multiplicative preprojective algebras.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("gb", help="Groebner basis and graded dimensions")
    _add_quiver(p)
    p.add_argument("--max-degree", type=int, default=None, help="postpone overlaps above this degree")
    p.set_defaults(func=cmd_gb)

    p = sub.add_parser("nf", help="normal form of a polynomial")
    _add_quiver(p)
    p.add_argument("--poly", required=True, help="polynomial expression")
    p.set_defaults(func=cmd_nf)

    p = sub.add_parser("member", help="ideal membership of a polynomial")
    _add_quiver(p)
    p.add_argument("--poly", required=True, help="polynomial expression")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("hh0", help="zeroth Hochschild homology")
    _add_quiver(p, relations=False)
    p.add_argument("--algebra", default="add", help="add, mult or partial:<vertex> (default add)")
    p.add_argument("--primes", default=None, help="comma-separated primes for the multi-prime fallback over Z")
    p.set_defaults(func=cmd_hh0)

    p = sub.add_parser("dims", help="N and M for the correction spaces")
    _add_quiver(p, relations=False)
    p.add_argument("--twisted", action="store_true", help="move each arrow target by the Nakayama permutation")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("verify", help="check an explicit isomorphism table")
    p.add_argument("--paper", required=True, help="D4..Dn, D(n), D4-shaw, E6, E7 or E8")
    p.add_argument("--spelling", default="display", choices=["display", "dprefix"], help="which transcription to load")
    p.add_argument("--field", default="Q", help="coefficients (a prime field must avoid the bad primes)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("apply", help="apply a map file to a polynomial")
    p.add_argument("--quiver", required=True, help="builtin:<A|D|E><n> or a quiver file")
    p.add_argument("--map", required=True, help="map file: vertex/define/arrow lines")
    p.add_argument("--poly", required=True, help="polynomial expression")
    p.add_argument("--field", default="Q", help="coefficients (default Q)")
    p.add_argument("--reduce", default=None, help="reduce the image modulo add, mult or partial:<vertex>")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("reproduce-paper", help="run the acceptance suite")
    p.add_argument("--only", action="append", default=None, help=f"checks to run (prefixes allowed): {', '.join(check_names())}")
    p.add_argument("--field", default=None, help="extra prime field for the HH0 and isomorphism checks")
    p.add_argument("--quiet", action="store_true", help="print findings only for failing checks")
    p.add_argument("--output-dir", default=None, help=f"also write the report there (default ${OUTPUT_ENV})")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None, out=None):
    out = out or print
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, QuiverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GroebnerError, MorphismError, DomainError, ArithmeticError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
