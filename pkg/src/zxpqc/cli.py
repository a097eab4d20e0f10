"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 malformed input file, 3 evaluation
budget or size exceeded, 4 certification mismatch.  Errors go to stderr as
``E<code>: message``.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .diagram import Diagram
from .errors import (EdgeNotInGraph, GraphFormatError, MissingBinding, SchemaViolation, SpecMismatch,
                     TermBudgetExceeded, TooLarge, ZXError)
from .evaluator import Strategy, cost_expectation, edge_expectation
from .oracle import DEFAULT_SEED, zz_expectation
from .pqc import lightcone_reduce, qaoa1_closed_form
from .problem import QAOA, HwEffSU2, ProblemGraph, RyProduct, load_graph
from .rewrite import parse_rules, simplify_run
from .scalar import ScalarExpr, random_bindings

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET, EXIT_MISMATCH = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_USAGE, f"{self.prog}: {message}")


_ANGLE = re.compile(r"^([+-]?)(\d+(?:\.\d*)?)?\s*\*?\s*pi(?:\s*/\s*(\d+(?:\.\d*)?))?$")


def parse_angle(text: str) -> float:
    """Radians from ``0.3``, ``pi``, ``-pi/4``, ``3pi/4`` or ``2*pi/3``."""
    s = text.strip().replace(" ", "")
    m = _ANGLE.match(s)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        num = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        if den == 0:
            raise ValueError(f"division by zero in angle {text!r}")
        return sign * num * math.pi / den
    return float(s)


def parse_bindings(items: Sequence[str]) -> Dict[str, float]:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise CliError(EXIT_USAGE, f"--bind expects name=value, got {item!r}")
        name, val = item.split("=", 1)
        try:
            out[name.strip()] = parse_angle(val)
        except ValueError:
            raise CliError(EXIT_USAGE, f"cannot parse angle {val!r} for {name!r}") from None
    return out


def parse_edge(text: str) -> Tuple[int, int]:
    try:
        u, v = (int(x) for x in text.split(","))
    except ValueError:
        raise CliError(EXIT_USAGE, f"--edge expects U,V, got {text!r}") from None
    return u, v


def _graph(path: str) -> ProblemGraph:
    try:
        return load_graph(path)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read graph file: {exc}") from None


def _ansatz(name: str, g: ProblemGraph, p: int):
    if name == "ry":
        return RyProduct(g.n)
    if name == "qaoa":
        return QAOA(p)
    if name == "hweff":
        return HwEffSU2(g.n)
    raise CliError(EXIT_USAGE, f"unknown ansatz {name!r}")


def _edges(g: ProblemGraph, args) -> List[Tuple[int, int]]:
    if getattr(args, "edge", None):
        u, v = parse_edge(args.edge)
        g.check_edge(u, v)
        return [(u, v)]
    return list(g.edges)


def _value(e: ScalarExpr, binding: Dict[str, float]) -> Optional[float]:
    if not e.params() <= set(binding):
        return None
    return float(np.real(e.eval(binding)))


def _emit(doc: dict, text_lines: List[str], mode: str) -> None:
    if mode == "json":
        sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


# -- commands ------------------------------------------------------------------------

def cmd_expval(args) -> int:
    g = _graph(args.graph)
    a = _ansatz(args.ansatz, g, args.p)
    binding = parse_bindings(args.bind)
    unknown = set(binding) - set(a.params())
    if unknown:
        raise CliError(EXIT_USAGE, f"unknown parameters {sorted(unknown)}; expected {a.params()}")
    edges = _edges(g, args)
    s = Strategy(budget=args.budget)
    terms, lines, exprs = [], [], []
    for u, v in edges:
        e = edge_expectation(g, a, (u, v), lightcone=args.lightcone, s=s)
        exprs.append(e)
        val = _value(e, binding)
        terms.append({"edge": [u, v], "formula": str(e), "expr": e.to_json(), "value": val})
        line = f"<Z{u} Z{v}> = {e}"
        if val is not None:
            line += f"  ~ {val:.12g}"
        lines.append(line)
    doc = {"ansatz": args.ansatz, "p": args.p if args.ansatz == "qaoa" else None,
           "bindings": binding, "terms": terms}
    if len(edges) == g.m and not args.edge:
        c = cost_expectation(g, exprs)
        val = _value(c, binding)
        doc["cost"] = {"formula": str(c), "expr": c.to_json(), "value": val}
        line = f"<C> = {c}"
        if val is not None:
            line += f"  ~ {val:.12g}"
        lines.append(line)
    _emit(doc, lines, args.out)
    return EXIT_OK


def cmd_formula(args) -> int:
    g = _graph(args.graph)
    u, v = parse_edge(args.edge)
    e = qaoa1_closed_form(g, (u, v))
    _emit({"edge": [u, v], "formula": str(e), "expr": e.to_json()}, [str(e)], args.out)
    return EXIT_OK


def cmd_simplify(args) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read diagram file: {exc}") from None
    try:
        d = Diagram.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, f"invalid JSON: {exc}") from None
    try:
        rules = parse_rules(args.rules) if args.rules else None
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    if args.max_steps < 0:
        raise CliError(EXIT_USAGE, "--max-steps must be non-negative")
    res = simplify_run(d, rules, args.max_steps)
    out = json.dumps(res.diagram.to_json(), sort_keys=True) + "\n"
    if args.output == "-":
        sys.stdout.write(out)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    sys.stderr.write(f"steps: {res.steps}{' (step budget exhausted)' if res.exhausted else ''}\n")
    return EXIT_OK


def cmd_lightcone(args) -> int:
    g = _graph(args.graph)
    u, v = parse_edge(args.edge)
    if args.p < 0:
        raise CliError(EXIT_USAGE, "--p must be non-negative")
    rg, qmap = lightcone_reduce(g, (u, v), args.p)
    doc = {"graph": rg.to_json(), "qubit_map": {str(k): w for k, w in sorted(qmap.items())},
           "edge": [qmap[u], qmap[v]]}
    sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_check(args) -> int:
    g = _graph(args.graph)
    a = _ansatz(args.ansatz, g, args.p)
    s = Strategy(budget=args.budget)
    bindings = random_bindings(a.params(), args.trials, seed=args.seed)
    ok = True
    lines, rows = [], []
    for u, v in _edges(g, args):
        e = edge_expectation(g, a, (u, v), lightcone=args.lightcone, s=s)
        err = 0.0
        for b in bindings:
            err = max(err, abs(complex(e.eval(b)) - zz_expectation(g, a, b, (u, v))))
        good = err <= args.tol
        ok &= good
        rows.append({"edge": [u, v], "max_error": err, "ok": good})
        lines.append(f"({u},{v}) {'ok' if good else 'MISMATCH'} max_error={err:.3e}")
    _emit({"ok": ok, "trials": args.trials, "tol": args.tol, "edges": rows}, lines, args.out)
    if not ok:
        raise CliError(EXIT_MISMATCH, "symbolic result disagrees with the statevector oracle")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zxpqc", description="Exact ZX-calculus expectation values for MaxCut ansatze.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def graph_args(sp, edge_required=False):
        sp.add_argument("--graph", required=True, help="graph file: 'n m' then m lines 'u v'")
        sp.add_argument("--edge", required=edge_required, help="edge as U,V")

    def ansatz_args(sp):
        sp.add_argument("--ansatz", required=True, choices=["ry", "qaoa", "hweff"])
        sp.add_argument("--p", type=int, default=1, help="QAOA depth")
        sp.add_argument("--lightcone", action="store_true", help="restrict to each edge's causal cone")
        sp.add_argument("--budget", type=int, default=4096, help="maximum number of expansion terms")

    e = sub.add_parser("expval", help="symbolic <Z_u Z_v> and <C>")
    graph_args(e)
    ansatz_args(e)
    e.add_argument("--all-edges", action="store_true", help="every edge plus <C> (the default)")
    e.add_argument("--bind", action="append", default=[], metavar="NAME=VALUE",
                   help="bind a parameter, e.g. gamma=pi/4 or beta=0.3")
    e.add_argument("--out", choices=["text", "json"], default="text")
    e.set_defaults(func=cmd_expval)

    f = sub.add_parser("formula", help="depth-one QAOA closed form for an edge")
    graph_args(f, edge_required=True)
    f.add_argument("--out", choices=["text", "json"], default="text")
    f.set_defaults(func=cmd_formula)

    s = sub.add_parser("simplify", help="rewrite a diagram JSON file to its fixpoint")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out", dest="output", required=True, help="output path, '-' for stdout")
    s.add_argument("--rules", help="comma-separated rule ids, e.g. f,id,pi")
    s.add_argument("--max-steps", type=int, default=100000)
    s.set_defaults(func=cmd_simplify)

    lc = sub.add_parser("lightcone", help="reduced graph and qubit map for an edge")
    graph_args(lc, edge_required=True)
    lc.add_argument("--p", type=int, required=True)
    lc.set_defaults(func=cmd_lightcone)

    c = sub.add_parser("check", help="certify symbolic results against the statevector oracle")
    graph_args(c)
    ansatz_args(c)
    c.add_argument("--trials", type=int, default=32)
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.add_argument("--out", choices=["text", "json"], default="text")
    c.set_defaults(func=cmd_check)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise CliError(EXIT_USAGE, "missing command; see --help")
        if getattr(args, "edge", None) and getattr(args, "all_edges", False):
            raise CliError(EXIT_USAGE, "--edge and --all-edges are mutually exclusive")
        return args.func(args)
    except CliError as exc:
        code, msg = exc.code, str(exc)
    except (GraphFormatError, SchemaViolation) as exc:
        code, msg = EXIT_INPUT, str(exc)
    except (TermBudgetExceeded, TooLarge) as exc:
        code, msg = EXIT_BUDGET, str(exc)
    except (EdgeNotInGraph, SpecMismatch, MissingBinding) as exc:
        code, msg = EXIT_USAGE, str(exc)
    except ZXError as exc:
        code, msg = EXIT_INPUT, f"{type(exc).__name__}: {exc}"
    sys.stderr.write(f"E{code}: {msg}\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
