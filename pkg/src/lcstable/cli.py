"""Command-line entry point: ``lcstable <command> ...``.

Exit status is 0 on success, 1 when a verification fails, 2 on usage or
parse errors.  ``--format json`` switches every command to structured output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import closure as cl
from . import gfp
from .clones import CloneId, member, parse_clone
from .stability import (TABLE3, HOLD_BUDGET, SAMPLE_SIZE, inject_fault, left_stable, right_stable,
                        verify_table3)
from .zhegalkin import anf, format_table, parse_fn, signature

ARITY_ENV = "LCSTABLE_ARITY_CAP"
DEFAULT_CAP = 4
HARD_CAP = 5

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def global_cap():
    raw = os.environ.get(ARITY_ENV, str(DEFAULT_CAP))
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"{ARITY_ENV} must be an integer, got {raw!r}") from None
    if not 1 <= cap <= HARD_CAP:
        raise UsageError(f"{ARITY_ENV} must lie in 1..{HARD_CAP}")
    return cap


def _cap(value):
    limit = global_cap()
    cap = limit if value is None else value
    if not 1 <= cap <= limit:
        raise UsageError(f"arity cap {cap} outside 1..{limit} (raise it with {ARITY_ENV}, at most {HARD_CAP})")
    return cap


def _functions(literals):
    """Each argument may hold several comma-separated literals."""
    out = []
    for lit in literals:
        for part in filter(None, (p.strip() for p in lit.split(","))):
            try:
                out.append(parse_fn(part))
            except ValueError as e:
                raise UsageError(f"cannot parse function: {e}") from None
    return out


def _descriptor(text):
    try:
        return cl.parse_descriptor(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _clone(text):
    try:
        return parse_clone(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _emit(args, payload, text_lines):
    if args.format == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        for line in text_lines:
            print(line)


# commands ------------------------------------------------------------------------

def cmd_analyze(args):
    reports, lines = [], []
    for f in _functions(args.functions):
        sig = signature(f)
        clones = [str(c) for c in CloneId if member(c, f)]
        rep = {
            "function": str(f), "arity": f.arity, "table": format_table(f),
            "anf": [sorted(s) for s in sorted(anf(f), key=lambda s: (len(s), sorted(s)))],
            "degree": sig.degree, "charrank": sig.charrank, "parity": "odd" if sig.parity else "even",
            "profile": list(sig.profile), "self_dual": "S" in clones, "reflexive": sig.charrank == 0,
            "constant": sig.degree == 0, "clones": clones, "class": str(cl.classify([f])),
        }
        reports.append(rep)
        lines += [
            f"{rep['function']}",
            f"  arity {f.arity}, table {rep['table']}",
            f"  degree {sig.degree}, charrank {sig.charrank}, {rep['parity']}, profile (c0, c1) = {sig.profile}",
            f"  self-dual: {rep['self_dual']}, reflexive: {rep['reflexive']}, constant: {rep['constant']}",
            f"  clones: {' '.join(clones)}",
            f"  generated stable class: {rep['class']}",
        ]
    _emit(args, reports, lines)
    return OK


def cmd_classify(args):
    F = _functions(args.functions)
    d = cl.classify(F)
    _emit(args, {"generators": [str(f) for f in F], "class": d.to_dict()}, [str(d)])
    return OK


def cmd_closure(args):
    F = _functions(args.functions)
    cap = _cap(args.max_arity)
    if any(f.arity > cap for f in F):
        raise UsageError(f"a generator has arity above the cap {cap}")
    d = cl.classify(F)
    payload = {"generators": [str(f) for f in F], "class": d.to_dict(), "cap": cap}
    lines = [str(d)]
    status = OK
    if args.check:
        oracle = cl.closure_oracle(F, cap)
        expected = cl.descriptor_class(d, cap)
        agree = oracle.same_members(expected)
        sizes = oracle.sizes()
        payload.update({"oracle_sizes": sizes, "agreement": agree})
        lines += [f"  arity {n}: {k} functions" for n, k in sizes.items()]
        if agree:
            lines.append(f"agreement OK up to arity {cap}")
        else:
            n, t, in_oracle = oracle.first_difference(expected)
            side = "oracle only" if in_oracle else "classification only"
            lines.append(f"agreement FAILED: arity {n}, table {t:#x} ({side})")
            payload["difference"] = {"arity": n, "table": t, "in_oracle": in_oracle}
            status = FAILED
    _emit(args, payload, lines)
    return status


def cmd_stability(args):
    K = _descriptor(args.cls)
    cap = _cap(args.cap)
    clones = [_clone(c) for c in args.clone] if args.clone else list(CloneId)
    sides = ("right", "left") if args.side == "both" else (args.side,)
    verdicts = []
    for C in clones:
        for side in sides:
            if side == "right":
                verdicts.append(right_stable(K, C, cap))
            else:
                verdicts.append(left_stable(K, C, cap, budget=args.budget, sample=args.sample, seed=args.seed))
    lines = [f"class {K}, cap {cap}"]
    for v in verdicts:
        lines.append(f"  {v.side:5s} {v.clone:9s} {'Holds' if v.holds else 'Fails'}"
                     + (f"  {v.witness}" if v.witness else "") + (f"  ({v.note})" if v.note else ""))
    _emit(args, {"class": K.to_dict(), "verdicts": [v.to_dict() for v in verdicts]}, lines)
    return OK


def _parse_params(text):
    only = {}
    for part in filter(None, (p.strip() for p in (text or "").split(","))):
        key, _, val = part.partition("=")
        if key not in ("a", "b", "i", "j", "k") or not val.isdigit():
            raise UsageError(f"bad parameter {part!r}; expected e.g. k=1,a=0")
        only[key] = int(val)
    return only


def cmd_table3(args):
    cap = _cap(args.cap)
    if not 2 <= args.max_param <= 3:
        raise UsageError("--max-param must be 2 or 3")
    rows = inject_fault(TABLE3) if args.inject_fault else TABLE3
    only = _parse_params(args.params)
    if args.row:
        rows = tuple(r for r in rows if r.pattern == args.row)
        if not rows:
            raise UsageError(f"no row with pattern {args.row!r}")
    reports = verify_table3(args.max_param, cap, only=only, rows=rows)
    ok = all(r.passed for r in reports)
    lines = []
    for r in reports:
        i = r.instance
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {i.label:42s} {str(i.descriptor):22s} "
                     f"right {str(i.right_max):6s} left {i.left_max}")
        for rec in r.records:
            if not rec.passed or args.verbose:
                v = rec.verdict
                got = "Holds" if v is None or v.holds else "Fails"
                detail = f"  {v.witness}" if v is not None and v.witness else ""
                note = f"  ({v.note})" if v is not None and v.note else ""
                lines.append(f"      {rec.side:5s} {rec.clone:9s} expected {rec.expected}, got {got}{detail}{note}")
    lines.append(f"{sum(r.passed for r in reports)}/{len(reports)} instances pass at cap {cap}")
    _emit(args, {"cap": cap, "passed": ok, "instances": [r.to_dict() for r in reports]}, lines)
    return OK if ok else FAILED


def _gfp_functions(literals):
    try:
        return [gfp.parse_gfp(s) for s in literals]
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_gfp(args):
    F = _gfp_functions(args.functions)
    try:
        cls = gfp.gfp_classify(F)
    except ValueError as e:
        raise UsageError(str(e)) from None
    payload = {"functions": [{"function": str(f), "degree": gfp.gfp_degree(f)} for f in F], "class": str(cls)}
    lines = [f"{f}  degree {gfp.gfp_degree(f)}" for f in F] + [f"class {cls}"]
    status = OK
    if args.closure is not None and F:
        try:
            fam = gfp.gfp_closure_oracle(F, args.closure)
        except ValueError as e:
            raise UsageError(str(e)) from None
        rows = []
        for n in range(1, args.closure + 1):
            within = gfp.family_within_degree(fam, cls.degree, n)
            equal = gfp.family_equals_degree(fam, cls.degree, n)
            rows.append({"arity": n, "dimension": fam.dim(n), "within": within, "equal": equal})
            lines.append(f"  arity {n}: span of dimension {fam.dim(n)}, within D{cls.degree}: {within}, "
                         f"equal: {equal}")
            status = status if within else FAILED
        payload["closure"] = rows
    _emit(args, payload, lines)
    return status


def _dot(descriptors, edges):
    out = ["digraph stable_classes {", "  rankdir=BT;", "  node [shape=box, fontsize=10];"]
    ids = {d: f"n{k}" for k, d in enumerate(descriptors)}
    for d, nid in ids.items():
        out.append(f'  {nid} [label="{d}"];')
    for a, b in edges:
        out.append(f"  {ids[a]} -> {ids[b]};")
    out.append("}")
    return "\n".join(out)


def cmd_lattice(args):
    if args.deg_bound < 0 or args.char_bound < 0:
        raise UsageError("bounds must be nonnegative")
    ds = cl.enumerate_descriptors(args.deg_bound, args.char_bound)
    edges = cl.hasse_edges(ds)
    if args.dot:
        print(_dot(ds, edges))
        return OK
    graded = sum(d.is_graded for d in ds)
    lines = [f"{len(ds)} classes ({graded} graded, {len(ds) - graded} special), {len(edges)} cover relations"]
    lines += [f"  {a}  <  {b}" for a, b in edges]
    _emit(args, {"nodes": [d.to_dict() for d in ds], "edges": [[str(a), str(b)] for a, b in edges]}, lines)
    return OK


# parser --------------------------------------------------------------------------

def build_parser():
    def shared(defaults):
        # the options may go before or after the subcommand; only the top level sets defaults
        opts = argparse.ArgumentParser(add_help=False)
        opts.add_argument("--format", choices=("text", "json"),
                          default="text" if defaults else argparse.SUPPRESS)
        opts.add_argument("--seed", type=int, default=0 if defaults else argparse.SUPPRESS,
                          help="seed for sampled checks")
        return opts

    common = shared(False)
    p = argparse.ArgumentParser(prog="lcstable", description=__doc__.splitlines()[0], parents=[shared(True)])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="invariants and clone memberships")
    a.add_argument("functions", nargs="+")
    a.set_defaults(run=cmd_analyze)

    c = sub.add_parser("classify", parents=[common], help="name the stable class generated by functions")
    c.add_argument("functions", nargs="*")
    c.set_defaults(run=cmd_classify)

    c = sub.add_parser("closure", parents=[common], help="classification, optionally checked by brute force")
    c.add_argument("functions", nargs="*")
    c.add_argument("--max-arity", type=int)
    c.add_argument("--check", action="store_true")
    c.set_defaults(run=cmd_closure)

    s = sub.add_parser("stability", parents=[common], help="stability of a named class under clones")
    s.add_argument("cls", metavar="CLASS")
    s.add_argument("--clone", action="append", help="repeatable; default all nineteen")
    s.add_argument("--side", choices=("right", "left", "both"), default="both")
    s.add_argument("--cap", type=int)
    s.add_argument("--budget", type=int, default=HOLD_BUDGET)
    s.add_argument("--sample", type=int, default=SAMPLE_SIZE)
    s.set_defaults(run=cmd_stability)

    t = sub.add_parser("table3", parents=[common], help="verify the stability table")
    t.add_argument("--cap", type=int)
    t.add_argument("--max-param", type=int, default=3)
    t.add_argument("--params", help="fix parameters, e.g. k=1 or a=0,b=1")
    t.add_argument("--row", help="restrict to one row pattern, e.g. X_k")
    t.add_argument("--inject-fault", action="store_true", help="lower the right maximum of the X_1 row")
    t.add_argument("-v", "--verbose", action="store_true")
    t.set_defaults(run=cmd_table3)

    g = sub.add_parser("gfp", parents=[common], help="reduced polynomials over GF(p)")
    g.add_argument("functions", nargs="*")
    g.add_argument("--closure", type=int, metavar="CAP", help="also compute the bounded closure")
    g.set_defaults(run=cmd_gfp)

    lt = sub.add_parser("lattice", parents=[common], help="inclusion diagram of the stable classes")
    lt.add_argument("--deg-bound", type=int, default=1)
    lt.add_argument("--char-bound", type=int, default=1)
    lt.add_argument("--dot", action="store_true")
    lt.set_defaults(run=cmd_lattice)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.run(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
