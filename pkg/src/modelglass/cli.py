"""Command-line entry point.

Exit status: 0 on success, 1 on domain errors (the input is well formed but
the requested object does not exist or violates a precondition), 2 on usage
and parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .filters import Filter, FilterError, generated_filter, is_filter, is_ultrafilter, limit_points, parse_family
from .graphs.graph import Graph, load_graph
from .graphs.halfgraph import find_half_graph
from .graphs.ramsey import DEFAULT_SEARCH_CAP, FAMILIES, max_homogeneous, stable_ramsey_report
from .graphs.regularity import (
    DEFAULT_EXACT_CAP,
    DEFAULT_TRIALS,
    NotStable,
    check_pair,
    piece_budget,
    stable_regularity,
)
from .semantics import DEFAULT_FORMULA_CAP, definable_algebra, holds, solution_set
from .structures import Model, load_model
from .syntax import (
    EMPTY_SIGNATURE,
    GRAPH_SIGNATURE,
    ORDER_SIGNATURE,
    ORDERED_RING_SIGNATURE,
    RING_SIGNATURE,
    Signature,
    SyntaxError_,
    parse_formula,
    parse_signature,
    print_formula,
    quantifier_rank,
)
from .typespace import check_partial_type, complete_types, count_dlo_types
from .ultraproduct import ax_check, iso_check, los_check, ultraproduct

SCHEMA_VERSION = 1

PRESETS = {
    "empty": EMPTY_SIGNATURE,
    "graph": GRAPH_SIGNATURE,
    "order": ORDER_SIGNATURE,
    "ring": RING_SIGNATURE,
    "ordered-ring": ORDERED_RING_SIGNATURE,
}


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


# ---------------------------------------------------------------------------
# Helpers


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _signature(value: str | None) -> Signature:
    if value is None:
        return EMPTY_SIGNATURE
    if value in PRESETS:
        return PRESETS[value]
    if os.path.exists(value):
        return parse_signature(_read(value))
    return parse_signature(value)


def _model(path: str, sig: Signature) -> Model:
    return load_model(_read(path), sig)


def _ints(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected a rational such as 1/4, got {text!r}") from None


def _set(s) -> str:
    return "{" + ",".join(map(str, sorted(s))) + "}"


def _tuple(t) -> str:
    return str(t[0]) if len(t) == 1 else "(" + ",".join(map(str, t)) + ")"


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float):
        return round(x, 9)
    return x


class Output:
    def __init__(self, args):
        self.args = args
        self.lines: list[str] = []
        self.caps: dict[str, Any] = {}

    def text(self, line: str = "") -> None:
        self.lines.append(line)

    def emit(self, result: dict) -> None:
        if self.args.format == "json":
            doc = {
                "schema_version": SCHEMA_VERSION,
                "tool": "modelglass",
                "version": __version__,
                "command": self.args.command_name,
                "seed": self.args.seed,
                "caps": self.caps,
                "result": result,
            }
            sys.stdout.write(json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n")
        else:
            sys.stdout.write("".join(line + "\n" for line in self.lines))


# ---------------------------------------------------------------------------
# Subcommands


def cmd_parse(args, out: Output) -> int:
    sig = _signature(args.sig)
    f = parse_formula(args.formula, sig)
    text = print_formula(f, sig)
    free = sorted(f.free_vars)
    out.text(text)
    out.text(f"free: {' '.join(free) if free else '(sentence)'}")
    out.text(f"quantifier rank: {quantifier_rank(f)}")
    out.emit({"formula": text, "free_variables": free, "quantifier_rank": quantifier_rank(f)})
    return 0


def cmd_eval(args, out: Output) -> int:
    sig = _signature(args.sig)
    source = args.sentence if args.sentence is not None else args.formula
    if source is None:
        raise UsageError("give --sentence or --formula")
    f = parse_formula(source, sig)
    if args.model is None:
        raise UsageError("--model is required")
    m = _model(args.model, sig)
    if args.sentence is not None:
        if f.free_vars:
            raise DomainError(f"not a sentence: free variables {' '.join(sorted(f.free_vars))}")
        value = holds(m, f)
        out.text("true" if value else "false")
        out.emit({"sentence": print_formula(f, sig), "holds": value})
        return 0
    names = args.vars.split(",") if args.vars else sorted(f.free_vars)
    if not names:
        raise UsageError("a formula with no free variables needs --vars or --sentence")
    ds = solution_set(m, f, names)
    tuples = sorted(ds.extension)
    out.text(f"# {' '.join(names)}: {len(tuples)} tuples")
    for t in tuples:
        out.text(" ".join(map(str, t)))
    out.emit({"formula": print_formula(f, sig), "vars": names, "solutions": tuples})
    return 0


def cmd_definable(args, out: Output) -> int:
    sig = _signature(args.sig)
    m = _model(args.model, sig)
    params = _ints(args.params)
    out.caps = {"formula_cap": args.formula_cap, "set_cap": args.set_cap, "term_depth": args.term_depth}
    alg = definable_algebra(m, params, args.rank, args.k, args.term_depth, args.formula_cap, args.set_cap)
    out.text(f"{len(alg.cells)} atoms, {len(alg.sets)} definable sets"
             + ("" if alg.complete else " (incomplete)"))
    for note in alg.notes:
        out.text(f"# {note}")
    rows = []
    for s in alg.sets:
        members = sorted(s.extension)
        witness = print_formula(s.formula, sig)
        rows.append({"extension": members, "witness": witness})
        out.text("{" + ",".join(_tuple(t) for t in members) + "}\t" + witness)
    out.emit({"params": params, "rank_bound": args.rank, "k": args.k, "complete": alg.complete,
              "atoms": [sorted(c) for c in alg.cells], "sets": rows, "notes": alg.notes})
    return 0


def cmd_types(args, out: Output) -> int:
    if args.dlo is not None:
        if args.dlo < 0:
            raise UsageError("--dlo needs a nonnegative count")
        t = count_dlo_types(args.dlo)
        out.text(f"{t.count} complete 1-types over {args.dlo} parameters")
        for d in t.descriptions:
            out.text(f"  {d}")
        out.emit({"dlo_parameters": args.dlo, "count": t.count, "types": list(t.descriptions)})
        return 0
    if args.model is None:
        raise UsageError("give --model or --dlo")
    sig = _signature(args.sig)
    m = _model(args.model, sig)
    params = _ints(args.params)
    if args.partial:
        formulas = [parse_formula(p, sig) for p in args.partial]
        verdict = check_partial_type(m, params, formulas)
        if verdict:
            out.text(f"partial type, realized by {_set(verdict.realizations)}")
        else:
            out.text("not a partial type: empty intersection of "
                     + "; ".join(print_formula(f, sig) for f in verdict.conflict))
        out.emit({"is_partial_type": verdict.is_partial_type, "realizations": verdict.realizations,
                  "conflict": [print_formula(f, sig) for f in verdict.conflict]})
        return 0
    out.caps = {"formula_cap": args.formula_cap, "term_depth": args.term_depth}
    part = complete_types(m, params, args.rank, args.term_depth, args.formula_cap)
    out.text(f"{len(part.blocks)} types over {_set(params)} at rank <= {args.rank}"
             + ("" if part.complete else " (incomplete)"))
    for block, f in zip(part.blocks, part.formulas):
        out.text(f"{_set(block)}\t{print_formula(f, sig)}")
    out.emit({"params": params, "rank_bound": args.rank, "complete": part.complete,
              "types": [{"realizations": b, "formula": print_formula(f, sig)}
                        for b, f in zip(part.blocks, part.formulas)]})
    return 0


def cmd_filter(args, out: Output) -> int:
    fam = parse_family(args.family)
    if args.generate:
        fil = generated_filter(fam)
        points = limit_points(fil)
        ultra = is_ultrafilter(fil)
        out.text(f"generated filter: {len(fil)} sets, limit points {_set(points)}"
                 + (", ultrafilter" if ultra else ""))
        out.emit({"generated": True, "size": len(fil), "members": [sorted(s) for s in fil.sets()],
                  "limit_points": points, "ultrafilter": ultra})
        return 0
    check = is_filter(fam)
    ultra = bool(check) and is_ultrafilter(fam)
    out.text(check.describe() + (", ultrafilter" if ultra else ""))
    out.emit({"filter": check.ok, "failed_condition": check.condition or None,
              "witness": [sorted(s) for s in check.witness], "ultrafilter": ultra,
              "limit_points": limit_points(fam) if check else None})
    return 0


def cmd_ultraproduct(args, out: Output) -> int:
    sig = _signature(args.sig)
    sentence = parse_formula(args.sentence, sig) if args.sentence else None
    models = [_model(p, sig) for p in args.models]
    if not 0 <= args.principal_at < len(models):
        raise DomainError(f"--principal-at must index one of the {len(models)} models")
    d = Filter.principal(len(models), args.principal_at)
    out.caps = {"product_cap": args.product_cap, "iso_node_cap": args.node_cap}
    up = ultraproduct(models, d, collapse=args.collapse, product_cap=args.product_cap)
    iso = iso_check(up, models[args.principal_at], args.node_cap)
    out.text(f"ultraproduct of {len(models)} models by the principal ultrafilter at {args.principal_at}: "
             f"{up.size} elements")
    out.text(f"isomorphic to factor {args.principal_at}: {iso.verdict}")
    result = {"size": up.size, "representatives": up.representatives, "iso_verdict": iso.verdict,
              "isomorphism": iso.mapping, "collapsed": args.collapse}
    if iso.witness is not None:
        out.text(f"distinguishing sentence: {print_formula(iso.witness, sig)}")
        result["distinguishing_sentence"] = print_formula(iso.witness, sig)
    if sentence is not None:
        rep = los_check(models, d, sentence, up)
        out.text(f"ultraproduct satisfies sentence: {'true' if rep.ultraproduct_holds else 'false'}")
        out.text(f"factors satisfying it: {_set(rep.index_set)} "
                 f"({'in' if rep.large else 'not in'} the ultrafilter)")
        out.text(f"transfer consistent: {'yes' if rep.consistent else 'NO'}")
        result["sentence"] = {"text": print_formula(sentence, sig), "ultraproduct_holds": rep.ultraproduct_holds,
                              "factor_holds": rep.factor_holds, "large": rep.large, "consistent": rep.consistent}
    out.emit(result)
    return 0 if iso.verdict != "not isomorphic" else 1


def cmd_ax(args, out: Output) -> int:
    if args.p not in (2, 3, 5, 7):
        raise UsageError("--p must be one of 2, 3, 5, 7")
    rep = ax_check(args.n, args.k, args.p)
    out.text("true" if rep.holds else "false")
    out.text(f"# {rep.coefficients} coefficients, quantifier rank {rep.quantifier_rank}")
    if args.timing:
        out.text(f"# {rep.seconds:.2f} s")
    out.emit({"n": rep.n, "k": rep.k, "p": rep.p, "holds": rep.holds, "coefficients": rep.coefficients,
              "quantifier_rank": rep.quantifier_rank})
    return 0


def _graph(path: str) -> Graph:
    return load_graph(_read(path))


def cmd_half_graph(args, out: Output) -> int:
    g = _graph(args.file)
    w = find_half_graph(g, args.k)
    out.text("none" if w is None else str(w))
    out.emit({"n": g.n, "k": args.k, "found": w is not None,
              "a": None if w is None else list(w.a), "b": None if w is None else list(w.b)})
    return 0


def cmd_pair(args, out: Output) -> int:
    g = _graph(args.file)
    eps = _fraction(args.eps)
    out.caps = {"exact_cap": args.exact_cap, "trials": args.trials}
    v = check_pair(g, _ints(args.x), _ints(args.y), eps, args.exact_cap, args.trials, args.seed)
    out.text(f"density {v.density}")
    out.text(v.describe())
    out.emit({"density": v.density, "eps": eps, "regular": v.regular, "method": v.method,
              "witness": v.witness, "deviation": v.deviation, "trials": v.trials,
              "seed": v.seed})
    return 0


def cmd_regularity(args, out: Output) -> int:
    g = _graph(args.file)
    eps = _fraction(args.eps)
    budget = args.budget if args.budget is not None else piece_budget(eps, args.base)
    out.caps = {"piece_budget": budget, "base": args.base, "exact_cap": args.exact_cap, "trials": args.trials}
    try:
        cert = stable_regularity(g, eps, args.k, budget, args.base, args.seed, args.exact_cap, args.trials)
    except NotStable as e:
        out.text(f"not {args.k}-stable: half-graph {e.witness}")
        out.emit({"stable": False, "witness": {"a": list(e.witness.a), "b": list(e.witness.b)}})
        return 1
    out.text(f"{'pass' if cert.passed else 'FAIL'}: {len(cert.blocks)} pieces of sizes "
             f"{_set(set(cert.sizes))}, {len(cert.irregular_pairs)} irregular pairs")
    counts = cert.method_counts()
    out.text("pairs verified: " + ", ".join(f"{k} {v}" for k, v in counts.items()))
    for note in cert.notes:
        out.text(f"# {note}")
    for i, b in enumerate(cert.blocks):
        out.text(f"V{i}\t{_set(b)}")
    for (i, j), v in sorted(cert.pairs.items()):
        if not v.regular or args.verbose:
            out.text(f"V{i},V{j}\tdensity {v.density}\t{v.describe()}")
    if args.figure:
        from .plotting import plot_partition

        plot_partition(g, cert, args.figure)
        out.text(f"# figure written to {args.figure}")
    out.emit({
        "stable": True,
        "passed": cert.passed,
        "eps": eps,
        "k": args.k,
        "blocks": cert.blocks,
        "equitable": cert.equitable,
        "rounds": cert.rounds,
        "notes": cert.notes,
        "pairs": [{"i": i, "j": j, "density": v.density, "regular": v.regular, "method": v.method,
                   "witness": v.witness, "deviation": v.deviation, "trials": v.trials, "seed": v.seed}
                  for (i, j), v in sorted(cert.pairs.items())],
    })
    return 0 if cert.passed else 1


def cmd_ramsey(args, out: Output) -> int:
    sizes = _ints(args.sizes)
    if not sizes or min(sizes) < 1:
        raise UsageError("--sizes needs positive integers")
    out.caps = {"search_cap": args.cap}
    rep = stable_ramsey_report(args.family, args.k, sizes, args.instances, args.seed, args.cap)
    from .plotting import RAMSEY_COLUMNS, plot_ramsey, ramsey_rows, write_ramsey_tsv

    rows = ramsey_rows(rep)
    out.text("\t".join(RAMSEY_COLUMNS))
    for r in rows:
        out.text("\t".join(r))
    for r in rep.skipped:
        out.text(f"# skipped n={r.n} seed={r.seed}: half-graph of height {args.k} ({r.witness})")
    below = [r for r in rep.measured if r.hom * r.hom < r.n]
    if args.tsv:
        write_ramsey_tsv(rep, args.tsv)
        out.text(f"# table written to {args.tsv}")
    if args.figure:
        plot_ramsey(rep, args.figure)
        out.text(f"# figure written to {args.figure}")
    out.emit({"family": args.family, "k": args.k, "sizes": sizes,
              "rows": [{"family": r.family, "n": r.n, "seed": r.seed, "parts": r.parts, "stable": r.stable,
                        "clique": r.clique, "independent": r.independent, "hom": r.hom,
                        "log_n_hom": r.exponent, "exact": r.exact,
                        "witness": None if r.witness is None else {"a": r.witness.a, "b": r.witness.b}}
                       for r in rep.rows],
              "skipped": len(rep.skipped), "below_sqrt_n": len(below)})
    return 0


def cmd_hom(args, out: Output) -> int:
    g = _graph(args.file)
    out.caps = {"search_cap": args.cap}
    h = max_homogeneous(g, args.cap)
    out.text(f"clique {len(h.clique)}: {_set(h.clique)}")
    out.text(f"independent {len(h.independent)}: {_set(h.independent)}")
    out.text(f"hom {h.hom}" + ("" if h.exact else " (heuristic)"))
    out.emit({"clique": h.clique, "independent": h.independent, "hom": h.hom, "exact": h.exact})
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    common.add_argument("--seed", type=int, default=0, help="seed for every randomized step (default 0)")

    sig_help = "signature: a file, inline text such as 'rel < /2 infix', or one of " + ", ".join(PRESETS)
    p = argparse.ArgumentParser(prog="modelglass", description="Finite model theory workbench.")
    p.add_argument("--version", action="version", version=f"modelglass {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_, description):
        sp = sub.add_parser(name, parents=[common], help=help_, description=description)
        sp.set_defaults(func=func, command_name=name)
        return sp

    sp = add("parse", cmd_parse, "parse and pretty-print a formula",
             "First-order syntax: parse a formula over a signature and print its canonical form, "
             "free variables and quantifier rank.")
    sp.add_argument("formula")
    sp.add_argument("--sig", help=sig_help)

    sp = add("eval", cmd_eval, "truth of a sentence or solution set of a formula",
             "Satisfaction in a finite model: decide a sentence, or list the solution set "
             "(definable set) of a formula.")
    sp.add_argument("--model", help="model file")
    sp.add_argument("--sig", help=sig_help)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--sentence")
    g.add_argument("--formula")
    sp.add_argument("--vars", help="comma-separated variable order for --formula")

    sp = add("definable", cmd_definable, "the boolean algebra of definable sets",
             "Definable sets: every subset of M^k definable with the given parameters at bounded "
             "quantifier rank, with one witness formula each.")
    sp.add_argument("--model", required=True)
    sp.add_argument("--sig", help=sig_help)
    sp.add_argument("--params", default="", help="comma-separated parameter elements")
    sp.add_argument("--rank", type=int, default=0)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--term-depth", type=int, default=1)
    sp.add_argument("--formula-cap", type=int, default=DEFAULT_FORMULA_CAP)
    sp.add_argument("--set-cap", type=int, default=DEFAULT_FORMULA_CAP)

    sp = add("types", cmd_types, "complete and partial 1-types",
             "Types: partition a finite model by rank-bounded complete 1-types over parameters, check a "
             "partial type for realizations, or list the 1-types of the rationals over n parameters.")
    sp.add_argument("--model")
    sp.add_argument("--sig", help=sig_help)
    sp.add_argument("--params", default="")
    sp.add_argument("--rank", type=int, default=1)
    sp.add_argument("--term-depth", type=int, default=1)
    sp.add_argument("--formula-cap", type=int, default=DEFAULT_FORMULA_CAP)
    sp.add_argument("--partial", action="append", metavar="FORMULA",
                    help="a one-variable formula of a partial type (repeatable)")
    sp.add_argument("--dlo", type=int, metavar="N", help="types of (Q,<) over N parameters")

    sp = add("filter", cmd_filter, "check filter and ultrafilter conditions",
             "Filters: check whether a family of subsets of a finite base is a filter or ultrafilter, "
             "or generate the filter it spans. Families use brace notation, e.g. '{{2,3},{3,4}} over 5'.")
    sp.add_argument("family")
    sp.add_argument("--generate", action="store_true", help="print the filter generated by the family")

    sp = add("ultraproduct", cmd_ultraproduct, "ultraproduct by a principal ultrafilter",
             "Ultraproducts: build the quotient of the product by the principal ultrafilter, verify "
             "it is isomorphic to the chosen factor, and test Los transfer for a sentence.")
    sp.add_argument("--models", nargs="+", required=True)
    sp.add_argument("--sig", help=sig_help)
    sp.add_argument("--principal-at", type=int, required=True)
    sp.add_argument("--sentence")
    sp.add_argument("--collapse", action="store_true", help="skip the generic quotient and use the factor")
    sp.add_argument("--product-cap", type=int, default=1_000_000)
    sp.add_argument("--node-cap", type=int, default=200_000)

    sp = add("ax-check", cmd_ax, "injective polynomial maps are surjective over F_p",
             "Ax's theorem at finite scale: evaluate the sentence 'every injective polynomial map "
             "F_p^n -> F_p^n of degree <= k is surjective' in the field F_p.")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--timing", action="store_true", help="report wall time (makes output non-reproducible)")

    gp = sub.add_parser("graph", help="stable graph combinatorics",
                        description="Half-graphs, regular partitions and homogeneous sets of finite graphs.")
    gsub = gp.add_subparsers(dest="graph_command", required=True, metavar="GRAPH_COMMAND")

    def gadd(name, func, help_, description):
        sp = gsub.add_parser(name, parents=[common], help=help_, description=description)
        sp.set_defaults(func=func, command_name=f"graph {name}")
        return sp

    sp = gadd("half-graph", cmd_half_graph, "find a half-graph of height k",
              "Order property: search for a_1..a_k, b_1..b_k with an edge a_i b_j iff i < j.")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("file", help="edge list or model file")

    sp = gadd("pair", cmd_pair, "check one pair for eps-regularity",
              "Epsilon-regularity of a single pair (X, Y): exact when the smaller side is under the "
              "cap, seeded sampling otherwise.")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--eps", default="1/4")
    sp.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_CAP)
    sp.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    sp.add_argument("file")

    sp = gadd("regularity", cmd_regularity, "regular partition of a stable graph",
              "Stable regularity: an equitable partition of a graph without k-half-graphs in which "
              "every pair is eps-regular, with a per-pair certificate.")
    sp.add_argument("--eps", default="1/4")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--budget", type=int, help="maximum number of pieces (default ceil(base^(1/eps)))")
    sp.add_argument("--base", type=int, default=2)
    sp.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_CAP)
    sp.add_argument("--trials", type=int, default=2000)
    sp.add_argument("--figure", help="write a density heatmap (PNG)")
    sp.add_argument("--verbose", action="store_true", help="list every pair, not only irregular ones")
    sp.add_argument("file")

    sp = gadd("ramsey", cmd_ramsey, "homogeneous sets in stable families",
              "Stable Ramsey: largest clique or independent set in seeded graphs without k-half-graphs, "
              "against n. Unstable instances are skipped and listed.")
    sp.add_argument("--family", choices=FAMILIES, required=True)
    sp.add_argument("--sizes", required=True, help="comma-separated vertex counts")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--instances", type=int, default=1, help="instances per size")
    sp.add_argument("--cap", type=int, default=DEFAULT_SEARCH_CAP, help="exact search cap on n")
    sp.add_argument("--tsv", help="write the table as TSV")
    sp.add_argument("--figure", help="write hom(G) against n (PNG)")

    sp = gadd("hom", cmd_hom, "largest clique and independent set",
              "Ramsey: exact maximum clique and independent set by branch and bound.")
    sp.add_argument("--cap", type=int, default=DEFAULT_SEARCH_CAP)
    sp.add_argument("file")
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    out = Output(args)
    try:
        return args.func(args, out)
    except (UsageError, SyntaxError_) as e:
        print(f"modelglass: error: {e}", file=sys.stderr)
        return 2
    except (DomainError, FilterError, ValueError, KeyError) as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"modelglass: {type(e).__name__}: {message}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
