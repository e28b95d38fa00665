"""``polarfix`` command line.

Exit codes: 0 pass, 1 verification fail, 2 no constructive solver,
3 representation / dimension / input error, 4 unknown gallery entry or
function family.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import conjugate as cj
from .config import RunConfig
from .documents import dumps, loads, parse_operator, parse_set
from .errors import (
    BadParams,
    NoConstructiveSolver,
    PolarfixError,
    RepresentationError,
    SingularOperator,
    UnknownEntry,
)
from .gallery import ENTRY_NAMES, gallery
from .polarity import polarity_map
from .solver import SOLVE_MODES, iterate_polarity, solve
from .svg import render
from .verify import verify_fixed_point

EXIT_PASS, EXIT_FAIL, EXIT_NO_SOLVER, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3, 4
CONJUGATE_FAMILIES = ("quadratic", "gauge2", "fb")


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the input-error code instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# -- I/O helpers -----------------------------------------------------------------

def _read_doc(arg):
    """A path, inline JSON (starting with ``{``), or ``-``/``None`` for stdin."""
    if arg is None or arg == "-":
        return loads(sys.stdin.read())
    if arg.lstrip().startswith("{"):
        return loads(arg)
    try:
        return loads(Path(arg).read_text())
    except OSError as exc:
        raise _InputError(f"cannot read {arg}: {exc.strerror}") from None


def _pair_docs(set_arg, op_arg):
    if set_arg is None and op_arg is None:
        doc = _read_doc(None)
        try:
            return doc["set"], doc["operator"]
        except (KeyError, TypeError):
            raise _InputError("stdin document needs 'set' and 'operator'") from None
    return _read_doc(set_arg), _read_doc(op_arg)


def _emit(text: str, path) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


class _InputError(Exception):
    pass


def _config(args) -> RunConfig:
    kw = {"tolerance": args.tol, "dirs": args.dirs, "seed": args.seed,
          "grid_nodes": args.grid, "max_steps": args.steps}
    try:
        return RunConfig(**{k: v for k, v in kw.items() if v is not None})
    except ValueError as exc:
        raise _InputError(str(exc)) from None


def _parse_params(tokens) -> dict:
    """``key=value`` tokens; values are JSON numbers, comma lists, or strings."""
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise _InputError(f"parameter {tok!r} is not key=value")
        key, raw = tok.split("=", 1)
        vals = []
        for part in raw.split(","):
            try:
                vals.append(json.loads(part))
            except json.JSONDecodeError:
                vals.append(part)
        out[key] = vals if len(vals) > 1 or key == "lams" else vals[0]
    return out


# -- commands --------------------------------------------------------------------

def cmd_solve(args) -> int:
    cfg = _config(args)
    G = parse_operator(_read_doc(args.operator))
    try:
        mode, result = solve(G, args.mode)
    except NoConstructiveSolver as exc:
        doc = {"error": "NoConstructiveSolver", "message": str(exc),
               "operator": G.to_doc(), "symmetric": G.is_symmetric}
        if exc.semi_skew is not None:
            doc["semi_skew"] = exc.semi_skew.to_doc()
        _emit(dumps(doc) + "\n", args.out)
        return EXIT_NO_SOLVER
    if mode == "1d":
        fam = result
        sets = [fam.unique] if fam.unique is not None else [fam.member(1), *fam.rays]
        reports = [verify_fixed_point(G, C, cfg) for C in sets]
        doc = {"mode": mode, "family": fam.describe(),
               "checked": [{"set": C.to_doc(), "report": r.to_doc()} for C, r in zip(sets, reports)]}
    else:
        reports = [verify_fixed_point(G, result, cfg)]
        doc = {"mode": mode, "set": result.to_doc(), "report": reports[0].to_doc()}
    _emit(dumps(doc) + "\n", args.out)
    if args.svg and result is not None and getattr(result, "dim", 0) == 2:
        Path(args.svg).write_text(render([result, polarity_map(G, result)], ["C", "(GC)°"], "solution"))
    return EXIT_PASS if all(r.passed for r in reports) else EXIT_FAIL


def cmd_verify(args) -> int:
    cfg = _config(args)
    set_doc, op_doc = _pair_docs(args.set, args.operator)
    C, G = parse_set(set_doc), parse_operator(op_doc)
    rep = verify_fixed_point(G, C, cfg)
    _emit(dumps(rep.to_doc()) + "\n", args.out)
    if args.svg and C.dim == 2:
        Path(args.svg).write_text(render([C, polarity_map(G, C)], ["C", "(GC)°"], f"verdict: {rep.verdict}"))
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_iterate(args) -> int:
    cfg = _config(args)
    set_doc, op_doc = _pair_docs(args.set, args.operator)
    C, G = parse_set(set_doc), parse_operator(op_doc)
    trace = iterate_polarity(G, C, max_steps=cfg.max_steps, tol=cfg.tolerance, config=cfg)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "self_residual", "consecutive_residual"])
    for step, r, c in trace.rows():
        w.writerow([step, repr(r), "" if math.isnan(c) else repr(c)])
    _emit(buf.getvalue(), args.out)
    summary = {"verdict": trace.verdict, "period": trace.period, "steps": len(trace.self_residuals),
               "min_self_residual": trace.min_self_residual}
    if trace.normalized_residuals:
        summary["min_normalized_residual"] = min(trace.normalized_residuals)
    print(dumps(summary), file=sys.stderr if not args.out else sys.stdout)
    if args.svg and C.dim == 2:
        frames = trace.sets[: min(6, len(trace.sets))]
        Path(args.svg).write_text(render(frames, [f"C{k}" for k in range(len(frames))], "iterates"))
    return EXIT_PASS


def cmd_gallery(args) -> int:
    cfg = _config(args)
    if args.name == "list":
        _emit("\n".join(ENTRY_NAMES) + "\n", args.out)
        return EXIT_PASS
    entry = gallery(args.name, **_parse_params(args.params))
    doc = entry.to_doc(cfg)
    if "witness_norms" in entry.extras:
        doc["witness_norms"] = entry.extras["witness_norms"]
    if "facet_error" in entry.extras:
        doc["facet_error"] = entry.extras["facet_error"]
    if "semi_skew" in entry.extras:
        doc["semi_skew"] = entry.extras["semi_skew"].to_doc()
    _emit(dumps(doc) + "\n", args.out)
    if args.svg and entry.G.dim == 2:
        shown, labels = [], []
        for lab, C in zip(entry.labels, entry.sets):
            shown += [C, polarity_map(entry.G, C)]
            labels += [lab, f"(G {lab})°"]
        Path(args.svg).write_text(render(shown, labels, entry.citation))
    ok = [item["report"]["verdict"] for item in doc["sets"]] == entry.expected
    return EXIT_PASS if ok else EXIT_FAIL


def _conjugate_run(args, cfg):
    nodes = cfg.grid_nodes
    hw = args.half_width
    factor = cfg.grid_error_factor
    if args.family == "fb":
        b = args.b
        f = cj.GridFunction.sample(cj.fb_function(b), [(-hw, hw)], nodes)
        fs = cj.legendre_grid(f)
        res, used = cj.composed_residual(f, fs, [[-1.0]])
        ident = "f(x) = f*(-x)"
    elif args.family == "quadratic":
        A = np.asarray(json.loads(args.matrix), dtype=float) if args.matrix else np.eye(2)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] > 2:
            raise _InputError("--matrix must be a 1x1 or 2x2 matrix")
        f = cj.GridFunction.sample(lambda X: 0.5 * np.einsum("ij,jk,ik->i", X, A, X),
                                   [(-hw, hw)] * len(A), nodes)
        fs = cj.legendre_grid(f)
        Y = fs.points()
        exact = np.array([cj.quadratic_conjugate(A, y) for y in Y])
        ok = fs.reliable.ravel()
        res, used = float(np.max(np.abs(fs.values.ravel()[ok] - exact[ok]))), int(ok.sum())
        ident = "f* = <A^-1 y, y>/2"
    else:
        if args.set is None:
            raise _InputError("gauge2 needs --set")
        C = parse_set(_read_doc(args.set))
        f = cj.GridFunction.sample(cj.half_gauge_squared(C), [(-hw, hw)] * C.dim, nodes)
        fs = cj.legendre_grid(f)
        if args.operator:
            G = parse_operator(_read_doc(args.operator))
            res, used = cj.composed_residual(f, fs, G.matrix.T)
            ident = "f(x) = f*(G^T x)"
        else:
            Y = fs.points()
            exact = 0.5 * C.support_many(Y) ** 2
            ok = fs.reliable.ravel()
            res, used = float(np.max(np.abs(fs.values.ravel()[ok] - exact[ok]))), int(ok.sum())
            ident = "f* = support^2 / 2"
    tol = factor * f.h
    report = {"family": args.family, "identity": ident, "residual": res, "nodes_used": used,
              "h": f.h, "tolerance": tol, "verdict": "pass" if res <= tol else "fail"}
    return f, fs, report


def cmd_conjugate(args) -> int:
    if args.family not in CONJUGATE_FAMILIES:
        print(f"unknown function family {args.family!r}; known: {', '.join(CONJUGATE_FAMILIES)}",
              file=sys.stderr)
        return EXIT_UNKNOWN
    cfg = _config(args)
    f, fs, report = _conjugate_run(args, cfg)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["function", *[f"x{k + 1}" for k in range(f.dim)], "value"])
            for name, g in (("f", f), ("fstar", fs)):
                for row in g.to_csv_rows():
                    w.writerow([name, *map(repr, row)])
    print(dumps(report))
    return EXIT_PASS if report["verdict"] == "pass" else EXIT_FAIL


# -- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, help="residual tolerance (default 1e-8)")
    common.add_argument("--dirs", type=int, help="sampled directions (default 512)")
    common.add_argument("--seed", type=int, help="sampling seed (default 0)")
    common.add_argument("--grid", type=int, help="grid nodes per axis (default 257)")
    common.add_argument("--steps", type=int, help="iteration budget (default 50)")
    common.add_argument("--svg", help="write a figure of the planar sets involved")
    common.add_argument("--out", help="output path (default stdout)")

    p = _Parser(prog="polarfix", description="Solve and certify the set equation C = (GC)°.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", parents=[common], help="construct a solution for an operator")
    s.add_argument("operator", nargs="?", help="operator document (path, inline JSON or -)")
    s.add_argument("--mode", default="auto", choices=SOLVE_MODES)
    s.set_defaults(func=cmd_solve)

    for name, func, text in (("verify", cmd_verify, "check whether a set solves the equation"),
                             ("iterate", cmd_iterate, "iterate C -> (GC)° and trace residuals")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("set", nargs="?", help="set document (path, inline JSON or -)")
        s.add_argument("operator", nargs="?", help="operator document (path, inline JSON or -)")
        s.set_defaults(func=func)

    s = sub.add_parser("gallery", parents=[common], help="reproduce a worked example ('list' to enumerate)")
    s.add_argument("name")
    s.add_argument("params", nargs="*", help="key=value overrides, e.g. n=3 or lams=0.5,3")
    s.set_defaults(func=cmd_gallery)

    s = sub.add_parser("conjugate", parents=[common], help="grid Legendre transform identities")
    s.add_argument("family", help="quadratic | gauge2 | fb")
    s.add_argument("--matrix", help="quadratic: JSON matrix A (default identity, 2D)")
    s.add_argument("--set", help="gauge2: set document")
    s.add_argument("--operator", help="gauge2: operator G for f(x) = f*(G^T x)")
    s.add_argument("--b", type=float, default=2.0, help="fb: parameter b > 0")
    s.add_argument("--half-width", type=float, default=4.0, help="primal box [-w, w]^d")
    s.set_defaults(func=cmd_conjugate)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors (code 3) and --help (code 0)
        return exc.code
    try:
        return args.func(args)
    except (UnknownEntry, BadParams) as exc:
        print(f"polarfix: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (RepresentationError, SingularOperator, _InputError) as exc:
        print(f"polarfix: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NoConstructiveSolver as exc:
        print(f"polarfix: {exc}", file=sys.stderr)
        return EXIT_NO_SOLVER
    except PolarfixError as exc:
        print(f"polarfix: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
