"""ucrystal command line: dim, eo, utype, reproduce, selftest.

Exit codes: 0 every check passed, 1 mismatch, 2 inconclusive or budget exhausted,
3 usage or input error.
"""
import argparse
import csv
import io
import json
import sys

from .crystal import compute_slopes, module_from_doc, mod_wedge2
from .eo import EOType, eo_dim_formula, eo_enumerate, eo_graph_dim
from .errors import BudgetExceeded, Inconclusive, ParseError, PrecisionExhausted, UCrystalError
from .ffield import ff_make, is_prime
from .npoly import NewtonPolygon, np_classify, np_dim_wedge
from .solver.isogeny import SolverConfig, isogeny_type
from .solver.ore import kernel_dim_mod_p

EXIT_OK, EXIT_MISMATCH, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# output -------------------------------------------------------------------

def _cell(v):
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(str(x) for x in v) + "]"
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else str(v)


def emit(rows, fmt, out=None, title=None, extra=None):
    out = out or sys.stdout
    if fmt == "json":
        doc = {"rows": rows}
        if title:
            doc["title"] = title
        if extra:
            doc.update(extra)
        out.write(json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n")
        return
    cols = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in cols])
        out.write(buf.getvalue())
        return
    if title:
        out.write(title + "\n")
    widths = [max([len(c)] + [len(_cell(r.get(c))) for r in rows]) for c in cols]
    out.write("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
    for r in rows:
        out.write("  ".join(_cell(r.get(c)).ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
    if extra:
        for k, v in extra.items():
            out.write(f"{k}: {_cell(v)}\n")


def _config(args):
    return SolverConfig(budget_seconds=args.budget_seconds, budget_nodes=args.budget_nodes,
                        strict=getattr(args, "strict", False))


def _load_module(path, p):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e.msg}", e.pos) from None
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: a module document must be a JSON object", 0)
    if "p" not in doc:
        doc["p"] = p
    try:
        return module_from_doc(doc)
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"{path}: {e}", None) from None


# commands -----------------------------------------------------------------

def cmd_dim(args):
    if args.newton is not None:
        nu = NewtonPolygon.parse(args.newton)
        row = {"newton": str(nu)}
        M = None
    else:
        M = _load_module(args.module, args.p)
        nu = NewtonPolygon.from_slopes(compute_slopes(M))
        row = {"module": M.label or args.module, "newton": str(nu)}
    if not nu.is_symmetric():
        raise UsageError(f"Newton polygon {nu} is not symmetric")
    c = np_classify(nu)
    row.update({"g": c.g, "dim": np_dim_wedge(nu), "supersingular": c.supersingular,
                "ordinary": c.ordinary, "almost_ordinary": c.almost_ordinary,
                "U_zero": c.U_zero, "U_is_Ga": c.U_is_Ga, "p_rank": c.p_rank})
    if M is not None:
        row["a"] = M.a_number()
        row["d1"] = kernel_dim_mod_p(mod_wedge2(M.rebuild(precision=1)))
    emit([row], args.format)
    return EXIT_OK


def _eo_row(t):
    free, cycles, gdim = eo_graph_dim(t)
    d = eo_dim_formula(t)
    return {"phi": str(t), "P": list(t.P), "a": t.a, "p_rank": t.p_rank(), "dimU[p]": d,
            "graph_dim": gdim, "cycles": list(cycles), "status": "PASS" if gdim == d else "FAIL"}


def cmd_eo(args):
    if args.g < 1 or args.g > args.gmax:
        raise UsageError(f"g must lie in 1..{args.gmax}")
    if args.type is not None:
        types = [EOType.parse(args.type, g=args.g)]
    else:
        types = eo_enumerate(args.g)
    rows = [_eo_row(t) for t in types]
    emit(rows, args.format)
    return EXIT_OK if all(r["status"] == "PASS" for r in rows) else EXIT_MISMATCH


def cmd_utype(args):
    M = _load_module(args.module, args.p)
    nu = None
    if args.newton:
        nu = NewtonPolygon.parse(args.newton)
    else:
        nu = NewtonPolygon.from_slopes(compute_slopes(M))
    try:
        it = isogeny_type(M, _config(args), nu=nu)
    except (BudgetExceeded, Inconclusive) as e:
        kind = "budget exhausted" if isinstance(e, BudgetExceeded) else "inconclusive"
        emit([{"module": M.label, "newton": str(nu), "status": kind, "message": str(e)}],
             args.format, extra={"partial": e.partial})
        return EXIT_INCONCLUSIVE
    row = {"module": M.label, "newton": str(nu), "D": it.total, "d_layers": it.layers,
           "partition": it.parts, "status": "PASS"}
    emit([row], args.format, extra={"certificates": it.certificates})
    return EXIT_OK


def cmd_reproduce(args):
    from .reproduce import (FAIL, INCONCLUSIVE, reproduce_appendix, reproduce_eo3,
                            reproduce_threefolds)
    cfg = _config(args)
    if args.target == "appendix":
        res = reproduce_appendix(gmax=args.gmax, deep=args.deep, p=args.p, config=cfg)
    elif args.target == "threefolds":
        res = reproduce_threefolds(p=args.p, config=cfg)
    else:
        res = reproduce_eo3()
    if args.format == "json":
        emit([r.to_doc() for r in res], "json", title=args.target)
    else:
        rows = []
        for r in res:
            row = {"row": r.key, "status": r.status}
            for name, c in r.cells.items():
                row[name] = _cell(c.got) if c.status == "PASS" else f"{c.status}:{_cell(c.got)}/{_cell(c.expected)}"
            if r.notes:
                row["notes"] = "; ".join(r.notes)
            rows.append(row)
        emit(rows, args.format, title=f"reproduce {args.target}")
    st = {r.status for r in res}
    if FAIL in st:
        return EXIT_MISMATCH
    if INCONCLUSIVE in st:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_selftest(args):
    from . import selftest
    suites = selftest.SUITES
    if args.suite:
        names = {s.suite_name: s for s in suites}
        unknown = [n for n in args.suite if n not in names]
        if unknown:
            raise UsageError(f"unknown suite(s) {unknown}; choose from {sorted(names)}")
        suites = [names[n] for n in args.suite]
    results = []
    for s in suites:
        kw = {}
        if args.quick and s.suite_name == "witt_ghost":
            kw["cases"] = 100
        if s.suite_name == "type_bounds":
            kw["deep"] = args.deep
        results.append(s(seed=args.seed, **kw))
    docs = [r.to_doc() for r in results]
    ok = all(r.ok for r in results)
    if args.format == "json":
        emit(docs, "json", extra={"status": "PASS" if ok else "FAIL"})
    else:
        rows = [{"suite": d["suite"], "status": d["status"], "cases": d["cases"],
                 "seconds": d["seconds"], "first_failure": (d["failures"] or [""])[0]} for d in docs]
        emit(rows, args.format, extra={"summary": ("PASS" if ok else "FAIL")
                                       + f" ({sum(r.cases for r in results)} cases)"})
    return EXIT_OK if ok else EXIT_MISMATCH


# parser -------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "csv", "json"), default="table")
    common.add_argument("--p", type=int, default=3, help="odd prime (default 3)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-nodes", type=int, default=2_000_000)
    common.add_argument("--budget-seconds", type=float, default=1800.0)
    common.add_argument("--deep", action="store_true", help="run full types for g >= 5")

    ap = _Parser(prog="ucrystal", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("dim", parents=[common], help="closed-form dim U and classification")
    src = d.add_mutually_exclusive_group(required=True)
    src.add_argument("--newton", help='slopes such as "1/2x3" or "1/3,2/3"')
    src.add_argument("--module", help="module document (JSON)")
    d.set_defaults(func=cmd_dim)

    e = sub.add_parser("eo", parents=[common], help="Ekedahl-Oort types and dim U[p]")
    e.add_argument("--g", type=int, required=True)
    e.add_argument("--type", help='phi sequence "0,1,2" or "P={2,3}"')
    e.add_argument("--gmax", type=int, default=10)
    e.set_defaults(func=cmd_eo)

    u = sub.add_parser("utype", parents=[common], help="isogeny type of U for a module file")
    u.add_argument("module")
    u.add_argument("--newton", help="Newton polygon, if known (skips slope computation)")
    u.add_argument("--strict", action="store_true",
                   help="accept only layers pinned by a closed-form bound")
    u.set_defaults(func=cmd_utype)

    r = sub.add_parser("reproduce", parents=[common], help="regenerate an embedded table")
    r.add_argument("target", choices=("threefolds", "eo3", "appendix"))
    r.add_argument("--gmax", type=int, default=6)
    r.add_argument("--strict", action="store_true")
    r.set_defaults(func=cmd_reproduce)

    s = sub.add_parser("selftest", parents=[common], help="run the property suites")
    s.add_argument("--suite", action="append", help="run only this suite (repeatable)")
    s.add_argument("--quick", action="store_true", help="fewer random Witt cases")
    s.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.p < 3 or not is_prime(args.p):
            raise UsageError("--p must be an odd prime")
        if args.budget_nodes <= 0 or args.budget_seconds <= 0:
            raise UsageError("budgets must be positive")
        ff_make(args.p, 1)
        return args.func(args)
    except (UsageError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Inconclusive as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except BudgetExceeded as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except PrecisionExhausted as e:
        print(f"inconclusive: {e} (raise the module precision or pass --newton)", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except UCrystalError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
