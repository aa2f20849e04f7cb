"""Command line front end: ``qeagraph <group> <command> ...``.

Every run starts by printing a ``# config`` line with the resolved settings.
Exit codes are 0 on success, 1 when a check fails and 2 for usage, format
or resource errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .atoms import CopyRule, atom_count, build_eta, read_dump, write_dump
from .errors import FormatError, InvalidParameter, ResourceLimit
from .graph import (build_standard, chromatic_number, disjoint_union, format_graph, girth,
                    mycielskian, read_graph, search_witness, write_graph)
from .terms import Strategy
from .verify import (check_axiom_suite, check_lemma_suite, exit_status, format_reports,
                     full_report, reports_json)
from .algebra import ComplexAlgebra

RULES = [r.value for r in CopyRule]
KINDS = ["complete", "cycle", "path", "edgeless"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: {message}")


class _Usage(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qeagraph", description="Graph atom structures and their complex algebras.")
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = groups.add_parser("graph", help="generate and inspect graphs")
    gs = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    gen = gs.add_parser("gen", help="write a standard graph")
    gen.add_argument("--kind", required=True, choices=KINDS)
    gen.add_argument("--size", required=True, type=int)
    gen.add_argument("-o", dest="out", required=True)
    an = gs.add_parser("analyze", help="nodes, edges, chromatic number, girth")
    an.add_argument("file")
    my = gs.add_parser("mycielski", help="write the Mycielskian of a graph")
    my.add_argument("file")
    my.add_argument("-o", dest="out", required=True)
    un = gs.add_parser("union", help="write a disjoint union")
    un.add_argument("first")
    un.add_argument("second")
    un.add_argument("-o", dest="out", required=True)
    wi = gs.add_parser("witness", help="search a graph with large girth and chromatic number")
    wi.add_argument("--min-girth", required=True, type=int)
    wi.add_argument("--min-chi", required=True, type=int)
    wi.add_argument("--seed", type=int, default=0)
    wi.add_argument("--budget", type=int, default=100_000)
    wi.add_argument("-o", dest="out")

    e = groups.add_parser("eta", help="build atom structures")
    es = e.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name in ("build", "count"):
        c = es.add_parser(name)
        c.add_argument("file")
        c.add_argument("-n", type=int, default=3)
        c.add_argument("--rule", choices=RULES, default=CopyRule.TRANSPARENT.value)
        if name == "build":
            c.add_argument("-o", dest="out", required=True)

    c = groups.add_parser("check", help="run check suites")
    cs = c.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    le = cs.add_parser("lemmas", help="relation laws on a dumped structure")
    le.add_argument("file")
    ax = cs.add_parser("axioms", help="an equation suite on a dumped structure")
    ax.add_argument("file")
    ax.add_argument("--suite", default="qea")
    ax.add_argument("--strategy", choices=["exhaustive", "random"], default="random")
    ax.add_argument("--samples", type=int, default=1000)
    ax.add_argument("--seed", type=int, default=0)
    al = cs.add_parser("all", help="build from a graph and run every suite")
    al.add_argument("file")
    al.add_argument("-n", type=int, default=3)
    al.add_argument("--rule", choices=RULES, default=CopyRule.TRANSPARENT.value)
    al.add_argument("--seed", type=int, default=0)
    for sub in (le, ax, al):
        sub.add_argument("--json", dest="json_out", help="also write the reports as JSON")
    return p


def _say(out, text=""):
    out.write(text + "\n")


def _girth_text(value):
    return "inf" if value == math.inf else str(int(value))


def _graph(args, out):
    if args.cmd == "gen":
        _say(out, f"# config kind={args.kind} size={args.size}")
        g = build_standard(args.kind, args.size)
        write_graph(g, args.out)
        _say(out, f"wrote {args.out}: {g.node_count} nodes, {g.edge_count} edges")
    elif args.cmd == "analyze":
        _say(out, f"# config file={args.file}")
        g = read_graph(args.file)
        _say(out, f"nodes {g.node_count}")
        _say(out, f"edges {g.edge_count}")
        _say(out, f"chi {chromatic_number(g)}")
        _say(out, f"girth {_girth_text(girth(g))}")
    elif args.cmd == "mycielski":
        _say(out, f"# config file={args.file}")
        g = mycielskian(read_graph(args.file))
        write_graph(g, args.out)
        _say(out, f"wrote {args.out}: {g.node_count} nodes, {g.edge_count} edges")
    elif args.cmd == "union":
        _say(out, f"# config files={args.first},{args.second}")
        g = disjoint_union(read_graph(args.first), read_graph(args.second))
        write_graph(g, args.out)
        _say(out, f"wrote {args.out}: {g.node_count} nodes, {g.edge_count} edges")
    elif args.cmd == "witness":
        _say(out, f"# config min_girth={args.min_girth} min_chi={args.min_chi} "
                  f"seed={args.seed} budget={args.budget}")
        g = search_witness(args.min_girth, args.min_chi, args.seed, args.budget)
        if g is None:
            _say(out, "no witness within budget")
            return 1
        # re-verify independently of the search
        chi, gi = chromatic_number(g), girth(g)
        if chi < args.min_chi or gi < args.min_girth:
            raise AssertionError("witness failed verification")
        _say(out, f"witness nodes {g.node_count} edges {g.edge_count} chi {chi} girth {_girth_text(gi)}")
        if args.out:
            write_graph(g, args.out)
            _say(out, f"wrote {args.out}")
        else:
            out.write(format_graph(g))
    return 0


def _eta(args, out):
    _say(out, f"# config file={args.file} n={args.n} rule={args.rule}")
    g = read_graph(args.file)
    if args.cmd == "count":
        _say(out, str(atom_count(g, args.n, CopyRule(args.rule))))
        return 0
    s = build_eta(g, args.n, CopyRule(args.rule))
    write_dump(s, args.out)
    _say(out, f"wrote {args.out}: {len(s)} atoms")
    return 0


def _emit(reports, args, out):
    out.write(format_reports(reports))
    counts = {k: sum(r.status == k for r in reports) for k in ("PASS", "FAIL", "SKIP")}
    _say(out, f"SUMMARY pass={counts['PASS']} fail={counts['FAIL']} skip={counts['SKIP']}")
    if args.json_out:
        Path(args.json_out).write_text(reports_json(reports) + "\n")
    return exit_status(reports)


def _check(args, out):
    if args.cmd == "lemmas":
        _say(out, f"# config file={args.file}")
        return _emit(check_lemma_suite(read_dump(args.file)), args, out)
    if args.cmd == "axioms":
        strat = Strategy(args.strategy, args.samples, args.seed)
        _say(out, f"# config file={args.file} suite={args.suite} strategy={strat.mode} "
                  f"samples={strat.samples} seed={strat.seed}")
        a = ComplexAlgebra(read_dump(args.file))
        return _emit(check_axiom_suite(a, args.suite, strat), args, out)
    strat = Strategy("random", 1000, args.seed)
    _say(out, f"# config file={args.file} n={args.n} rule={args.rule} strategy=random "
              f"samples={strat.samples} seed={strat.seed}")
    reports, _ = full_report(read_graph(args.file), args.n, CopyRule(args.rule), strat)
    return _emit(reports, args, out)


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parser().parse_args(argv)
    except _Usage as exc:
        _say(err, str(exc))
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return {"graph": _graph, "eta": _eta, "check": _check}[args.group](args, out)
    except (InvalidParameter, FormatError, ResourceLimit, OSError) as exc:
        _say(err, f"error: {exc}")
        return 2


def main() -> None:
    sys.exit(run())
