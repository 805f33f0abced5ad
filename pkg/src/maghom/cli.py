"""Command-line front end.

Exit codes: 0 success or pass, 1 check failure, 2 inapplicable hypothesis,
3 usage error, 4 resource guard, 5 internal inconsistency (e.g. magnitude
methods disagree).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from . import graph as gr
from .cache import ResultCache, table_to_cells
from .chains import chain_rank_table
from .dsl import DslError, load_graph, parse_edge_list
from .graph import Graph, GraphError
from .homology import (
    DEFAULT_MAX_TRAILS,
    METHODS,
    BigradedGroup,
    ResourceGuardError,
    compute_homology,
    magnitude_by_counting,
    magnitude_by_euler,
    magnitude_by_inverse_series,
    series_equal,
)
from .verify import (
    FAIL,
    check_cyclic_patterns,
    check_diagonal,
    check_disjoint_additivity,
    check_join_diagonal,
    check_kunneth,
    check_mayer_vietoris,
    check_support_bounds,
    check_tree_formula,
    homology as cached_homology,
)

EXIT_OK, EXIT_FAIL, EXIT_INAPPLICABLE, EXIT_USAGE, EXIT_GUARD, EXIT_INTERNAL = range(6)
JSON_SCHEMA = "maghom/table-1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def format_cell(rank, torsion) -> str:
    if rank is None:
        return "?"
    parts = [str(rank)] if rank else []
    parts += [f"Z/{d}" for d in (torsion or ())]
    return " ⊕ ".join(parts)


def _grid(lmax: int, cells: dict[tuple[int, int], str]) -> list[list[str]]:
    return [[cells.get((k, l), "") for k in range(lmax + 1)] for l in range(lmax + 1)]


def render_grid(lmax: int, cells: dict[tuple[int, int], str], fmt: str) -> str:
    """Rows are l (down the page), columns k; zero cells are blank."""
    grid = _grid(lmax, cells)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["l"] + [str(k) for k in range(lmax + 1)])
        for l, row in enumerate(grid):
            w.writerow([str(l)] + row)
        return buf.getvalue()
    width = max([len(s) for row in grid for s in row] + [len(str(lmax)), 1])
    lw = max(len(str(lmax)), 3)
    lines = ["l\\k".rjust(lw) + " " + " ".join(str(k).rjust(width) for k in range(lmax + 1))]
    for l, row in enumerate(grid):
        lines.append(str(l).rjust(lw) + " " + " ".join(s.rjust(width) for s in row).rstrip())
    return "\n".join(lines) + "\n"


def table_cells(table: BigradedGroup) -> dict[tuple[int, int], str]:
    out = {}
    for kl, c in table.cells.items():
        s = format_cell(c.rank, c.torsion)
        if s:
            out[kl] = s
    return out


def table_json(g: Graph, table: BigradedGroup, series: dict | None = None) -> str:
    doc = {
        "schema": JSON_SCHEMA,
        "tool_version": __version__,
        "graph": {"n": g.n, "edges": [list(e) for e in g.edges]},
        "lmax": table.lmax,
        "cells": table_to_cells(table),
        "series": series or {},
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _graph(spec: str) -> Graph:
    try:
        return load_graph(spec)
    except (DslError, GraphError) as exc:
        raise UsageError(f"cannot read graph {spec!r}: {exc}") from exc


def _homology(args, g: Graph) -> BigradedGroup:
    cache = None if args.no_cache else ResultCache()
    if cache is not None:
        hit = cache.get(g, args.lmax, args.torsion, args.rank_method)
        if hit is not None:
            return hit
    table = compute_homology(g, args.lmax, torsion=args.torsion, method=args.rank_method,
                             max_trails=args.max_trails, jobs=args.jobs)
    if cache is not None:
        cache.put(g, table, args.torsion, args.rank_method)
    return table


def cmd_homology(args) -> int:
    g = _graph(args.graph)
    table = _homology(args, g)
    if args.format == "json":
        series = {}
        if table.is_complete():
            series = {
                "counting": list(magnitude_by_counting(g, args.lmax)),
                "inverse": list(magnitude_by_inverse_series(g, args.lmax)),
                "euler": list(magnitude_by_euler(table)),
            }
        sys.stdout.write(table_json(g, table, series))
    else:
        sys.stdout.write(render_grid(args.lmax, table_cells(table), args.format))
    if not table.is_complete():
        print(f"resource guard: cells marked '?' were not computed; raise --max-trails "
              f"(currently {args.max_trails})", file=sys.stderr)
        return EXIT_GUARD
    return EXIT_OK


def cmd_chains(args) -> int:
    g = _graph(args.graph)
    counts = chain_rank_table(g, args.lmax)
    if args.format == "json":
        doc = {"schema": "maghom/chains-1", "graph": {"n": g.n, "edges": [list(e) for e in g.edges]},
               "lmax": args.lmax,
               "cells": [{"k": k, "l": l, "count": c}
                         for (k, l), c in sorted(counts.items(), key=lambda kv: (kv[0][1], kv[0][0]))]}
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        cells = {kl: str(c) for kl, c in counts.items()}
        sys.stdout.write(render_grid(args.lmax, cells, args.format))
    return EXIT_OK


def cmd_magnitude(args) -> int:
    g = _graph(args.graph)
    wanted = ["counting", "inverse", "euler"] if args.series_method == "all" else [args.series_method]
    series = {}
    for m in wanted:
        if m == "counting":
            series[m] = magnitude_by_counting(g, args.lmax)
        elif m == "inverse":
            series[m] = magnitude_by_inverse_series(g, args.lmax)
        else:
            table = _homology(args, g)
            if not table.is_complete():
                print("resource guard: homology incomplete; raise --max-trails", file=sys.stderr)
                return EXIT_GUARD
            series[m] = magnitude_by_euler(table)
    if args.format == "json":
        sys.stdout.write(json.dumps({k: list(v) for k, v in series.items()}) + "\n")
    else:
        for m, s in series.items():
            print(f"{m}: {', '.join(str(c) for c in s)}")
    if len(series) > 1:
        vals = list(series.values())
        agree = all(series_equal(vals[0], v) for v in vals[1:])
        if args.format != "json":
            print("agreement: " + ("yes" if agree else "NO"))
        if not agree:
            return EXIT_INTERNAL
    return EXIT_OK


def _parse_set(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise UsageError(f"bad vertex set {text!r}") from exc


_VERIFY_ARITY = {
    "diagonal": 1, "support-bounds": 1, "tree-formula": 1, "mayer-vietoris": 1,
    "disjoint-additivity": 2, "kunneth": 2, "join-diagonal": 2, "cyclic-patterns": 1,
}


def cmd_verify(args) -> int:
    name = args.check
    if len(args.graphs) != _VERIFY_ARITY[name]:
        raise UsageError(f"check {name!r} takes {_VERIFY_ARITY[name]} graph argument(s)")
    if name == "cyclic-patterns":
        try:
            n = int(args.graphs[0])
        except ValueError:
            raise UsageError("cyclic-patterns takes the cycle length n") from None
        if n < 3:
            raise UsageError("cyclic-patterns needs n >= 3")
        report = check_cyclic_patterns(n, args.lmax)
    else:
        graphs = [_graph(s) for s in args.graphs]
        labels = tuple(args.graphs)
        if name == "diagonal":
            report = check_diagonal(graphs[0], args.lmax, labels[0])
        elif name == "support-bounds":
            report = check_support_bounds(graphs[0], args.lmax, labels[0])
        elif name == "tree-formula":
            report = check_tree_formula(graphs[0], args.lmax, labels[0])
        elif name == "mayer-vietoris":
            if not (args.gset and args.hset):
                raise UsageError("mayer-vietoris needs --gset and --hset")
            try:
                report = check_mayer_vietoris(graphs[0], _parse_set(args.gset), _parse_set(args.hset),
                                              args.lmax, labels[0])
            except gr.CoverError as exc:
                raise UsageError(str(exc)) from exc
        elif name == "disjoint-additivity":
            report = check_disjoint_additivity(*graphs, args.lmax, labels)
        elif name == "kunneth":
            report = check_kunneth(*graphs, args.lmax, labels)
        else:
            report = check_join_diagonal(*graphs, args.lmax, labels)
    if args.format == "json":
        sys.stdout.write(json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        print(report.summary())
    return report.exit_code


def builtin_corpus() -> list[tuple[str, Graph]]:
    """Named graphs used by ``sweep`` and by the property tests."""
    out = []
    out += [(f"K({n})", gr.complete(n)) for n in range(1, 6)]
    out += [(f"E({n})", gr.discrete(n)) for n in range(1, 4)]
    out += [(f"C({n})", gr.cycle(n)) for n in range(3, 9)]
    out += [(f"P({n})", gr.path(n)) for n in range(2, 7)]
    out += [(f"star({n})", gr.star(n)) for n in (3, 4)]
    out += [
        ("E(2) * E(3)", gr.join(gr.discrete(2), gr.discrete(3))),
        ("E(2) * E(2) * E(2)", gr.join(gr.join(gr.discrete(2), gr.discrete(2)), gr.discrete(2))),
        ("C(5) * K(1)", gr.join(gr.cycle(5), gr.complete(1))),
        ("K(2) box P(3)", gr.box_product(gr.complete(2), gr.path(3))),
        ("K(2) box K(2) box K(2)", gr.box_product(gr.complete(2), gr.box_product(gr.complete(2), gr.complete(2)))),
        ("wedge(C(5),0,C(5),0)", gr.wedge(gr.cycle(5), 0, gr.cycle(5), 0)),
        ("C(5) + K(3)", gr.disjoint_union(gr.cycle(5), gr.complete(3))),
        ("two pentagons on an edge", two_pentagons()),
        ("petersen", gr.petersen()),
        ("icosahedral", gr.icosahedral()),
    ]
    return out


def two_pentagons() -> Graph:
    """Two 5-cycles sharing the edge {0, 4}: an 8-cycle with a chord."""
    return Graph.from_edges([(i, (i + 1) % 8) for i in range(8)] + [(0, 4)])


def _corpus_from_dir(path: str) -> list[tuple[str, Graph]]:
    out = []
    for f in sorted(Path(path).iterdir()):
        if f.is_file():
            try:
                out.append((f.name, parse_edge_list(f.read_text(encoding="utf-8"))))
            except DslError as exc:
                raise UsageError(f"{f}: {exc}") from exc
    return out


def cmd_sweep(args) -> int:
    corpus = _corpus_from_dir(args.corpus) if args.corpus else builtin_corpus()
    corpus = [(n, g) for n, g in corpus if g.n <= args.max_vertices]
    finds = []
    for name, g in corpus:
        if args.report == "torsion":
            table = cached_homology(g, args.lmax)
            tors = table.torsion_cells()
            incomplete = not table.torsion_complete()
            status = "torsion: " + (", ".join(f"({k},{l}):{list(t)}" for (k, l), t in tors.items())
                                    if tors else "none")
            if incomplete:
                status += " (some cells not computed)"
            if tors:
                finds.append(name)
        else:
            rep = check_diagonal(g, args.lmax, name)
            status = "diagonal" if rep.passed else "NOT diagonal"
            if rep.verdict == FAIL:
                first = rep.diffs[0]
                status += f" (first off-diagonal cell ({first['k']},{first['l']}) rank {first['lhs']})"
        print(f"{name:32s} n={g.n:<3d} {status}")
    if args.report == "torsion":
        print("torsion found in: " + ", ".join(finds) if finds else "no torsion found")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="maghom", description="Magnitude homology of graphs.")
    p.add_argument("--version", action="version", version=f"maghom {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def engine_opts(sp, method_flag="--method"):
        sp.add_argument("--lmax", type=int, default=6)
        sp.add_argument("--torsion", dest="torsion", action="store_true", default=True,
                        help="compute torsion via Smith normal form (default)")
        sp.add_argument("--no-torsion", dest="torsion", action="store_false")
        sp.add_argument(method_flag, dest="rank_method", choices=METHODS, default="auto",
                        help="rank method when Smith form is off or too large")
        sp.add_argument("--max-trails", type=int, default=DEFAULT_MAX_TRAILS)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--no-cache", action="store_true")

    sp = sub.add_parser("homology", help="table of ranks (and torsion) of MH_{k,l}")
    sp.add_argument("graph")
    engine_opts(sp)
    sp.add_argument("--format", choices=("pretty", "csv", "json"), default="pretty")
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("chains", help="table of ranks of the chain groups MC_{k,l}")
    sp.add_argument("graph")
    sp.add_argument("--lmax", type=int, default=6)
    sp.add_argument("--format", choices=("pretty", "csv", "json"), default="pretty")
    sp.set_defaults(func=cmd_chains)

    sp = sub.add_parser("magnitude", help="magnitude power series coefficients")
    sp.add_argument("graph")
    engine_opts(sp, "--rank-method")
    sp.add_argument("--method", dest="series_method", choices=("counting", "inverse", "euler", "all"),
                    default="all")
    sp.add_argument("--format", choices=("pretty", "json"), default="pretty")
    sp.set_defaults(func=cmd_magnitude)

    sp = sub.add_parser("verify", help="run a structural check")
    sp.add_argument("check", choices=sorted(_VERIFY_ARITY))
    sp.add_argument("graphs", nargs="+")
    sp.add_argument("--lmax", type=int, default=4)
    sp.add_argument("--gset")
    sp.add_argument("--hset")
    sp.add_argument("--format", choices=("pretty", "json"), default="pretty")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="summaries over a corpus of graphs")
    sp.add_argument("--max-vertices", type=int, default=10)
    sp.add_argument("--lmax", type=int, default=4)
    sp.add_argument("--report", choices=("torsion", "diagonal"), default="torsion")
    sp.add_argument("--corpus", help="directory of edge-list files (default: built-in list)")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"maghom: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceGuardError as exc:
        print(f"maghom: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
