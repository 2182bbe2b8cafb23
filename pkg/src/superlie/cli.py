"""Command-line front end.

Exit codes: 0 verified, 1 verification failure, 2 usage error,
3 inconclusive at truncation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import conformal as cf
from . import exceptional as ex
from . import multiplets as mp
from .errors import InconclusiveError, SeriesSpecError
from .fields import bracket, format_field
from .series import SeriesSpec, filtration_dims, membership, series_slices

OK, FAIL, USAGE, INCONCLUSIVE = 0, 1, 2, 3
FORMAT_ENV = "SUPERLIE_FORMAT"
EXCEPTIONAL = ("E(5|10)", "E(3|6)", "E(4|4)")


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _status(code):
    return {OK: "ok", FAIL: "fail", INCONCLUSIVE: "inconclusive"}[code]


def _weights(text):
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"weights must be a comma list of integers, got {text!r}") from None


def _algebra_name(text: str) -> str:
    return text.replace(" ", "")


# verbs ---------------------------------------------------------------------------------

def cmd_construct(args) -> tuple[int, dict]:
    name = _algebra_name(args.algebra)
    if name in EXCEPTIONAL or name.startswith("W(") and args.table:
        table = ex.build_table(name, args.degmax)
        rows = [{"index": i, "label": e.label, "parity": e.parity, "slot": e.slot,
                 "coef_degree": e.coef_degree} for i, e in enumerate(table.basis)]
        return OK, {"command": "construct", "status": "ok", "algebra": table.name,
                    "truncation": {"degmax": args.degmax}, "dim": len(rows), "basis": rows,
                    "failures": len(table.failures)}
    spec = SeriesSpec.parse(name)
    report = {"command": "construct", "algebra": str(spec), "truncation": {"degmax": args.degmax}}
    els = series_slices(spec, args.degmax)
    report["basis"] = [{"index": i, "label": format_field(b.field), "parity": b.parity, "degree": b.degree}
                       for i, b in enumerate(els)]
    report["dim"] = len(els)
    if args.filtration is not None:
        fr = filtration_dims(spec, args.filtration)
        report["filtration"] = {"dims": fr.dims, "growth": fr.growth, "note": fr.note}
    report["status"] = "ok"
    return OK, report


def _series_closure(spec, degmax):
    els = series_slices(spec, degmax)
    fields = [b.field for b in els]
    # d/dxi keeps x-degree, so a bracket is exact when the x-degrees sum to at most D
    D = fields[0].ctx.D if fields else 0
    tested = passed = skipped = 0
    bad = []
    for i, X in enumerate(fields):
        for j in range(i, len(fields)):
            Y = fields[j]
            if X.xdeg() + Y.xdeg() > D:
                skipped += 1
                continue
            tested += 1
            if membership(bracket(X, Y), spec):
                passed += 1
            elif len(bad) < 5:
                bad.append([i, j])
    return {"tested": tested, "passed": passed, "skipped": skipped, "offending": bad}


def cmd_verify(args) -> tuple[int, dict]:
    name = _algebra_name(args.algebra)
    report = {"command": "verify", "algebra": name, "truncation": {"degmax": args.degmax}, "checks": {}}
    code = OK
    if args.check == "closure":
        spec = SeriesSpec.parse(name)
        res = _series_closure(spec, args.degmax)
        report["checks"]["closure"] = res
        if res["passed"] != res["tested"]:
            code = FAIL
    else:
        if name in EXCEPTIONAL:
            table = ex.build_table(name, args.degmax)
        else:
            spec = SeriesSpec.parse(name)
            if spec.tag != "W":
                raise UsageError("jacobi tables are built for W(m|n) and the exceptional algebras; "
                                 "use --check closure for other series")
            table = ex.build_W_table(spec.m, spec.n, args.degmax)
        rep = table.jacobi()
        report["algebra"] = table.name
        report["checks"]["jacobi"] = rep.as_dict()
        if table.failures:
            report["checks"]["identification_failures"] = len(table.failures)
        if not rep.ok or table.failures:
            code = FAIL
        elif rep.tested == 0:
            code = INCONCLUSIVE
    report["status"] = _status(code)
    return code, report


def cmd_grade(args) -> tuple[int, dict]:
    name = _algebra_name(args.algebra)
    table = ex.build_table(name, args.degmax)
    weights = _weights(args.weights) if args.weights else table.default_weights
    try:
        view = ex.grade_by_weights(table, weights)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    comps = [{"degree": d, "dim": len(ix), "parity": view.parity_of(d), "complete": view.is_complete(d)}
             for d, ix in view.components.items()]
    checks = {}
    code = OK
    if not args.no_checks:
        props = ex.check_graded_properties(view, seed=args.seed)
        for key in ("G1", "transitivity", "irreducibility"):
            checks[key] = props[key]
        checks["jacobi"] = table.jacobi().as_dict() if args.jacobi else None
        statuses = [props[k]["status"] for k in ("G1", "transitivity", "irreducibility")]
        if "fail" in statuses:
            code = FAIL
        if checks["jacobi"] is None:
            del checks["jacobi"]
        elif checks["jacobi"]["passed"] != checks["jacobi"]["tested"]:
            code = FAIL
    report = {"command": "grade", "algebra": table.name,
              "truncation": {"degmax": args.degmax, "complete_below": view.complete_below},
              "weights": list(weights), "depth": view.depth, "consistent": view.consistent,
              "components": comps, "checks": checks, "status": _status(code)}
    return code, report


def cmd_conformal(args) -> tuple[int, dict]:
    if os.path.exists(args.algebra):
        with open(args.algebra) as fh:
            A = cf.parse_table(json.load(fh))
    else:
        try:
            A = cf.named_algebra(args.algebra)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    rep = cf.check_axioms(A)
    report = {"command": "conformal", "algebra": A.name or args.algebra,
              "table": cf.table_to_json(A)["brackets"], "checks": {"axioms": rep.as_dict()}}
    code = OK if rep.ok else FAIL
    if args.modes is not None:
        bad = cf.mode_jacobi(A, args.modes)
        report["checks"]["mode_jacobi"] = {"bound": args.modes, "failures": len(bad)}
        if bad:
            code = FAIL
    report["status"] = _status(code)
    return code, report


def cmd_multiplets(args) -> tuple[int, dict]:
    if args.action == "table1":
        return cmd_table1(args)
    labels = mp.degenerate_families(args.mmax, args.bmax)
    if args.fundamental:
        labels = mp.fundamental_filter(labels)
    rows = [{"label": str(lab), "charges": [mp._fmt(q) for q in mp.charges(lab)],
             "sl3_dim": mp.sl3_dim(lab.m, lab.n), "fundamental": mp.is_fundamental(lab)}
            for lab in labels]
    return OK, {"command": "multiplets", "status": "ok", "rows": rows,
                "bounds": {"mmax": args.mmax, "bmax": args.bmax}}


def cmd_table1(args) -> tuple[int, dict]:
    rep = mp.table1_verify()
    code = OK if rep["ok"] else FAIL
    return code, {"command": "table1", "status": _status(code), "rows": rep["rows"],
                  "counts": {"fermion": rep["fermion_rows"], "boson": rep["boson_rows"]}}


# output --------------------------------------------------------------------------------

def _render_text(report: dict) -> str:
    lines = []
    head = [f"{report['command']}"]
    if "algebra" in report:
        head.append(str(report["algebra"]))
    head.append(f"status={report['status']}")
    lines.append(" ".join(head))
    for key in ("truncation", "weights", "depth", "consistent", "dim", "counts", "bounds"):
        if key in report:
            lines.append(f"{key}: {json.dumps(_jsonable(report[key]), sort_keys=True)}")
    if "components" in report:
        for c in report["components"]:
            flag = "" if c["complete"] else "  (incomplete at truncation)"
            lines.append(f"  g[{c['degree']}]  dim {c['dim']}  {c['parity']}{flag}")
    for name, val in report.get("checks", {}).items():
        lines.append(f"{name}: {json.dumps(_jsonable(val), sort_keys=True)}")
    if "filtration" in report:
        lines.append(f"filtration: {json.dumps(_jsonable(report['filtration']), sort_keys=True)}")
    for row in report.get("basis", []):
        lines.append(f"  [{row['index']}] p={row['parity']} {row['label']}")
    for row in report.get("rows", []):
        lines.append("  " + "\t".join(_cell(row[k]) for k in row))
    for row in report.get("table", []):
        lines.append(f"  {row}")
    return "\n".join(lines)


def _cell(v):
    if isinstance(v, list):
        return ",".join(str(x) for x in v)
    return str(v)


def _render_tsv(report: dict) -> str:
    rows = report.get("rows") or report.get("components") or report.get("basis")
    if not rows:
        flat = {"command": report["command"], "status": report["status"]}
        for name, val in report.get("checks", {}).items():
            flat[name] = json.dumps(_jsonable(val), sort_keys=True)
        rows = [flat]
    cols = list(rows[0])
    out = ["\t".join(cols)]
    for r in rows:
        out.append("\t".join(_cell(_jsonable(r.get(c))) for c in cols))
    return "\n".join(out)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(report), sort_keys=True, indent=2)
    if fmt == "tsv":
        return _render_tsv(report)
    return _render_text(report)


# parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    default_fmt = os.environ.get(FORMAT_ENV, "text")
    if default_fmt not in ("text", "json", "tsv"):
        default_fmt = "text"
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "tsv"), default=default_fmt)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="superlie", description="Linearly compact Lie superalgebras at finite truncation")
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("construct", parents=[common], help="list a truncated basis")
    c.add_argument("algebra")
    c.add_argument("--degmax", type=int, default=2)
    c.add_argument("--filtration", type=int, metavar="JMAX")
    c.add_argument("--table", action="store_true", help="build W(m|n) as a structure table")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="run an identity suite")
    v.add_argument("algebra")
    v.add_argument("--degmax", type=int, default=2)
    v.add_argument("--check", choices=("jacobi", "closure"), default="jacobi")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("grade", parents=[common], help="weighted gradation and graded properties")
    g.add_argument("algebra")
    g.add_argument("--weights")
    g.add_argument("--degmax", type=int, default=2)
    g.add_argument("--jacobi", action="store_true")
    g.add_argument("--no-checks", action="store_true")
    g.set_defaults(func=cmd_grade)

    k = sub.add_parser("conformal", parents=[common], help="check lambda-bracket axioms")
    k.add_argument("algebra", help="virasoro, sl2, sl3, abelian or a JSON table file")
    k.add_argument("--modes", type=int, metavar="BOUND")
    k.set_defaults(func=cmd_conformal)

    m = sub.add_parser("multiplets", parents=[common], help="degenerate labels and charges")
    m.add_argument("action", choices=("enumerate", "table1"))
    m.add_argument("--mmax", type=int, default=3)
    m.add_argument("--bmax", type=int, default=3)
    m.add_argument("--fundamental", action="store_true")
    m.add_argument("--verify", action="store_true")
    m.set_defaults(func=cmd_multiplets)

    t = sub.add_parser("table1", parents=[common], help="verify the fundamental multiplet table")
    t.set_defaults(func=cmd_table1)
    return p


def _validate(args):
    for name in ("degmax", "mmax", "bmax"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            raise UsageError(f"--{name} must be nonnegative")
    if getattr(args, "modes", None) is not None and args.modes < 0:
        raise UsageError("--modes must be nonnegative")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        _validate(args)
        code, report = args.func(args)
    except (UsageError, SeriesSpecError) as exc:
        print(f"usage error: {exc}", file=err)
        return USAGE
    except InconclusiveError as exc:
        report = {"command": args.verb, "status": "inconclusive", "reason": str(exc)}
        print(render(report, args.format), file=out)
        return INCONCLUSIVE
    except ValueError as exc:
        print(f"usage error: {exc}", file=err)
        return USAGE
    print(render(report, args.format), file=out)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
