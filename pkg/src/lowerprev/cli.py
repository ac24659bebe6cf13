"""Command-line front end: ``lowerprev check|extend|gn``.

Exit codes: 0 success, 1 a check failed (or two formulas disagreed),
2 malformed input, 3 unsupported request or violated precondition.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import consistency as cons
from . import extensions as ext
from .choquet import choquet_integral
from .core import (DegenerateInputError, DomainError, Event, ExtendedRational, PreconditionError,
                   UnsupportedDomainError, format_decimal, format_rational)
from .document import Document, DocumentError, load_document, load_gambles, write_json
from .gn import (ConditionalEvent, gn_lower_extension, gn_upper_extension, inner_conditional,
                 outer_conditional)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2, 3

LEVELS = ("coherent", "2coherent", "convex", "2convex", "asl", "1asl")
UNCONDITIONAL_ONLY = {"coherent", "convex", "asl", "1asl"}
_CHECKS: dict[str, Callable] = {
    "coherent": cons.check_coherent,
    "2coherent": cons.check_2coherent,
    "convex": cons.check_convex,
    "2convex": cons.check_2convex,
    "asl": cons.check_asl,
    "1asl": cons.check_1asl,
}
KIND_NAMES = {"e": "E", "e2": "E2", "ec": "Ec", "e2c": "E2c", "choquet": "Choquet"}


class _Unsupported(Exception):
    pass


def show(x) -> str:
    """``p/q (≈ decimal)``; infinities print as ``+inf``."""
    x = ExtendedRational.coerce(x)
    if not x.is_finite:
        return str(x)
    q = x.value
    if q.denominator == 1:
        return format_rational(q)
    return f"{format_rational(q)} (≈ {format_decimal(q)})"


def _table(header: Sequence[str], rows: list[Sequence[str]]) -> str:
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines)


def _describe_witness(a, w: cons.Witness) -> list[str]:
    g, support = cons.gain(a, w)
    out = ["  witness: " + w.describe(a)]
    cells = ", ".join(f"{world}: {format_rational(v)}" for world, v in g.items())
    out.append(f"  gain: {{{cells}}}")
    out.append(f"  sup over {support.label()} = {show(w.supremum)}")
    return out


# --- check -------------------------------------------------------------------

def cmd_check(args) -> int:
    doc = load_document(args.file)
    a = doc.checkable()
    conditional = not a.is_unconditional
    if args.level == "all":
        levels = [lv for lv in LEVELS if not (conditional and lv in UNCONDITIONAL_ONLY)]
    else:
        levels = [args.level]
        if conditional and args.level in UNCONDITIONAL_ONLY:
            raise _Unsupported(f"level {args.level!r} needs an unconditional assessment")
    rows, notes, failed = [], [], False
    results = {}
    for level in levels:
        verdict = _CHECKS[level](a)
        rows.append((level, "pass" if verdict else "FAIL", verdict.reason))
        results[level] = {"holds": verdict.holds, "reason": verdict.reason}
        if not verdict:
            failed = True
            notes.append(f"{level}: {verdict.reason}")
            notes += _describe_witness(a, verdict.witness)
            results[level]["witness"] = {
                "bought": [[i, c] for i, c in verdict.witness.bought],
                "sold": verdict.witness.sold,
                "sold_coef": verdict.witness.sold_coef,
                "supremum": verdict.witness.supremum,
            }
    skipped = [lv for lv in LEVELS if lv not in levels] if args.level == "all" else []
    print(f"{args.file}: {len(a)} items, mode {doc.mode}")
    print(_table(("level", "verdict", "detail"), rows))
    if skipped:
        print(f"skipped (conditional items): {', '.join(skipped)}")
    for line in notes:
        print(line)
    if args.out:
        write_json(args.out, {"document": doc.raw, "checks": results})
    return EXIT_FAIL if failed else EXIT_OK


# --- extend ------------------------------------------------------------------

def _achiever_text(a) -> str:
    if a is None:
        return ""
    if isinstance(a, Event):
        return a.label()
    if isinstance(a, (list, tuple)):
        return "(" + ", ".join(_achiever_text(x) for x in a) + ")"
    if isinstance(a, Fraction):
        return format_rational(a)
    return str(a)


def _extend_one(doc: Document, z, kind: str, method: str):
    """Rows ``(kind, method, value, achiever)`` and whether LP and closed form agreed."""
    rows = []
    agree = True
    if doc.subspace is not None:
        if kind == "e":
            r = ext.e_subspace(doc.subspace, z)
        elif kind == "e2c":
            r = ext.e2c_plus_subspace(doc.subspace, z)
        else:
            raise _Unsupported(f"kind {kind!r} is not available for subspace documents")
        return [(kind, "subspace-lp", r.value, r.achiever)], True
    a = doc.assessment
    if kind == "choquet":
        return [(kind, "closed-form", ExtendedRational(choquet_integral(doc.powerset(), z)), None)], True
    lp_fn = {"e": ext.e_lp, "e2": ext.e2_lp, "ec": ext.ec_lp, "e2c": ext.e2c_direct}[kind]
    closed_fn = {"e2": ext.e2_powerset, "e2c": ext.e2c_powerset}.get(kind)
    want_lp = method in ("lp", "both") or closed_fn is None
    want_closed = method in ("closed-form", "both") and closed_fn is not None
    if want_closed and doc.mode != "powerset":
        if method == "closed-form":
            raise _Unsupported("closed forms need a powerset document (every union of atoms)")
        want_closed = False
        want_lp = True
    values = []
    if want_lp:
        r = lp_fn(a, z)
        rows.append((kind, "lp", r.value, r.achiever))
        values.append(r.value)
    if want_closed:
        r = closed_fn(doc.powerset(), z)
        rows.append((kind, "closed-form", r.value, r.achiever))
        values.append(r.value)
    if len(values) == 2 and values[0] != values[1]:
        agree = False
    return rows, agree


def cmd_extend(args) -> int:
    doc = load_document(args.file)
    gambles = load_gambles(args.gamble_file, doc.universe)
    for name, z in gambles:
        if doc.mode == "powerset" or args.kind == "choquet":
            if not doc.partition.is_gamble_measurable(z):
                raise DocumentError(f"gamble {name}", "not constant on the atoms")
    method = args.method or ("both" if doc.mode == "powerset" else "lp")
    if args.kind == "all":
        kinds = ["e", "e2", "ec", "e2c"]
        if doc.subspace is not None:
            kinds = ["e", "e2c"]
        elif doc.mode == "powerset":
            kinds.append("choquet")
    else:
        kinds = [args.kind]
    if doc.assessment is None and doc.subspace is None:
        raise DocumentError("items", "nothing to extend")
    if doc.assessment is not None and doc.subspace is None:
        doc.assessment.require_unconditional("extend")
    ok = True
    out = {}
    for name, z in gambles:
        rows = []
        for kind in kinds:
            kr, agree = _extend_one(doc, z, kind, method)
            rows += kr
            if not agree:
                ok = False
                print(f"MISMATCH for {name}, kind {kind}: "
                      + " vs ".join(f"{m}={show(v)}" for _, m, v, _ in kr), file=sys.stderr)
        print(f"{name} = {{{', '.join(f'{w}: {format_rational(v)}' for w, v in z.items())}}}")
        print(_table(("kind", "method", "value", "finite", "achiever"),
                     [(k, m, show(v), "yes" if v.is_finite else "no", _achiever_text(a))
                      for k, m, v, a in rows]))
        print()
        out[name] = {"gamble": z.as_dict(),
                     "rows": [{"kind": k, "method": m, "value": str(v)} for k, m, v, _ in rows]}
    if args.out:
        write_json(args.out, {"document": doc.raw, "extensions": out})
    return EXIT_OK if ok else EXIT_FAIL


# --- gn ----------------------------------------------------------------------

def cmd_gn(args) -> int:
    doc = load_document(args.file)
    u = doc.universe
    for n in list(args.C) + list(args.D):
        if n not in u:
            raise DocumentError("query", f"unknown world {n!r}")
    d = Event(u, args.D)
    if not d:
        raise _Unsupported("the conditioning event of the query is empty")
    cd = ConditionalEvent(Event(u, args.C), d)
    if cd.is_trivial:
        raise _Unsupported(f"{cd.label()} is trivial")
    f = doc.full_conditional()
    lo, hi = inner_conditional(cd, doc.partition), outer_conditional(cd, doc.partition)
    vlo, vhi = gn_lower_extension(f, cd), gn_upper_extension(f, cd)
    print(f"query: {cd.label()}")
    print(_table(("", "conditional event", "value"),
                 [("inner", lo.label(), show(vlo)), ("outer", hi.label(), show(vhi))]))
    if args.out:
        write_json(args.out, {"query": {"C": sorted(cd.antecedent.members, key=u.index),
                                        "D": sorted(d.members, key=u.index)},
                              "inner": {"C": sorted(lo.antecedent.members, key=u.index),
                                        "D": sorted(lo.conditioning.members, key=u.index),
                                        "value": vlo},
                              "outer": {"C": sorted(hi.antecedent.members, key=u.index),
                                        "D": sorted(hi.conditioning.members, key=u.index),
                                        "value": vhi}})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lowerprev",
                                     description="Consistency checks and natural extensions "
                                                 "for finite lower previsions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run consistency checks on an assessment")
    p.add_argument("file")
    p.add_argument("--level", choices=(*LEVELS, "all"), default="all")
    p.add_argument("--out", help="write a JSON report here")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("extend", help="evaluate natural extensions on gambles")
    p.add_argument("file")
    p.add_argument("gamble_file")
    p.add_argument("--kind", choices=(*KIND_NAMES, "all"), default="all")
    p.add_argument("--method", choices=("lp", "closed-form", "both"), default=None,
                   help="default: both for powerset documents, lp otherwise")
    p.add_argument("--out", help="write a JSON report here")
    p.set_defaults(run=cmd_extend)

    p = sub.add_parser("gn", help="inner/outer conditional events and GN-extensions")
    p.add_argument("file")
    p.add_argument("--C", nargs="*", default=[], metavar="WORLD", help="antecedent worlds")
    p.add_argument("--D", nargs="*", default=[], metavar="WORLD", help="conditioning worlds")
    p.add_argument("--out", help="write a JSON report here")
    p.set_defaults(run=cmd_gn)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except DocumentError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (_Unsupported, UnsupportedDomainError, PreconditionError, DegenerateInputError,
            DomainError) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ext.FormulaMismatch as exc:
        print(f"MISMATCH: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
