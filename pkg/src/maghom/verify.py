"""Machine checks of structural results on concrete graphs.

Every check returns a :class:`CheckReport` listing each compared cell, so a
failure can be reproduced from the report alone.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable

from . import graph as gr
from .chains import induced_chain_map
from .graph import Graph
from .homology import BigradedGroup, Cell, compute_homology, magnitude_by_counting, table_from_ranks
from .linalg import normalise_factors

PASS = "pass"
PASS_RANKS_ONLY = "pass (ranks only)"
FAIL = "fail"
INAPPLICABLE = "inapplicable"

EXIT_CODES = {PASS: 0, PASS_RANKS_ONLY: 0, FAIL: 1, INAPPLICABLE: 2}


@dataclass
class CheckReport:
    name: str
    graphs: tuple[str, ...]
    lmax: int
    verdict: str = PASS
    reason: str | None = None
    cells: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict in (PASS, PASS_RANKS_ONLY)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    @property
    def diffs(self) -> list[dict]:
        return [c for c in self.cells if not c["ok"]]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["graphs"] = list(self.graphs)
        return d

    def summary(self) -> str:
        head = f"{self.name} [{', '.join(self.graphs)}] lmax={self.lmax}: {self.verdict}"
        if self.reason:
            head += f" ({self.reason})"
        lines = [head]
        for c in self.diffs:
            lines.append(f"  mismatch at (k={c['k']}, l={c['l']}): {c['lhs']} != {c['rhs']}")
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)


@lru_cache(maxsize=128)
def homology(g: Graph, lmax: int) -> BigradedGroup:
    """Torsion-aware homology, memoised for repeated use inside checks."""
    return compute_homology(g, lmax, torsion=True)


def _describe(g: Graph, name: str | None) -> str:
    return name if name else f"graph(n={g.n}, m={g.num_edges})"


def _tors(t) -> tuple[int, ...] | None:
    return None if t is None else tuple(d for d in normalise_factors(t) if d > 1)


def _sum_tors(*parts):
    if any(p is None for p in parts):
        return None
    return _tors([d for p in parts for d in p])


class _Comparison:
    """Accumulates cellwise comparisons into a report."""

    def __init__(self, report: CheckReport):
        self.report = report
        self.ranks_only = False
        self.failed = False

    def cell(self, k, l, lhs, rhs, what="rank"):
        ok = lhs == rhs
        self.report.cells.append({"k": k, "l": l, "what": what, "lhs": lhs, "rhs": rhs, "ok": ok})
        if not ok:
            self.failed = True

    def torsion(self, k, l, lhs, rhs):
        if lhs is None or rhs is None:
            self.ranks_only = True
            return
        self.cell(k, l, list(lhs), list(rhs), "torsion")

    def finish(self, started: float) -> CheckReport:
        r = self.report
        if self.failed:
            r.verdict = FAIL
        elif self.ranks_only:
            r.verdict = PASS_RANKS_ONLY
            r.notes.append("torsion not computed for some cells; ranks compared only")
        else:
            r.verdict = PASS
        r.elapsed = time.perf_counter() - started
        return r


def _all_cells(lmax):
    keys = {(k, l) for l in range(lmax + 1) for k in range(l + 1)}
    return sorted(keys, key=lambda kl: (kl[1], kl[0]))


def _inapplicable(report: CheckReport, reason: str, started: float) -> CheckReport:
    report.verdict = INAPPLICABLE
    report.reason = reason
    report.elapsed = time.perf_counter() - started
    return report


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def check_diagonal(g: Graph, lmax: int, name: str | None = None) -> CheckReport:
    """Off-diagonal cells vanish; then magnitude coefficients alternate as (-1)^l rank MH_{l,l}."""
    t0 = time.perf_counter()
    rep = CheckReport("diagonal", (_describe(g, name),), lmax)
    cmp = _Comparison(rep)
    table = homology(g, lmax)
    for k, l in _all_cells(lmax):
        if k == l:
            continue
        c = table.cell(k, l)
        cmp.cell(k, l, c.rank, 0)
        cmp.torsion(k, l, _tors(c.torsion), ())
    if not cmp.failed:
        series = magnitude_by_counting(g, lmax)
        for l in range(lmax + 1):
            cmp.cell(l, l, series[l], (-1) ** l * table.rank(l, l), "magnitude coefficient")
    return cmp.finish(t0)


def check_disjoint_additivity(g: Graph, h: Graph, lmax: int,
                              names: tuple[str | None, str | None] = (None, None)) -> CheckReport:
    t0 = time.perf_counter()
    rep = CheckReport("disjoint-additivity", (_describe(g, names[0]), _describe(h, names[1])), lmax)
    cmp = _Comparison(rep)
    tu, tg, th = homology(gr.disjoint_union(g, h), lmax), homology(g, lmax), homology(h, lmax)
    for k, l in _all_cells(lmax):
        cmp.cell(k, l, tu.rank(k, l), _add(tg.rank(k, l), th.rank(k, l)))
        cmp.torsion(k, l, _tors(tu.torsion(k, l)), _sum_tors(tg.torsion(k, l), th.torsion(k, l)))
    return cmp.finish(t0)


def _add(*xs):
    return None if any(x is None for x in xs) else sum(xs)


def kunneth_expected(a: BigradedGroup, b: BigradedGroup, lmax: int) -> BigradedGroup:
    """Homology of a box product predicted from the factors.

    ``MH_{k,l}(G box H)`` is the sum over ``k1+k2=k, l1+l2=l`` of
    ``MH(G) (x) MH(H)`` plus, over ``k1+k2=k-1``, ``Tor(MH(G), MH(H))``.
    Groups are ``Z^r + sum Z/m``; tensor and Tor of cyclic groups use gcds.
    """
    ranks: dict = {}
    tors: dict = {}
    rank_unknown, torsion_unknown = set(), set()
    for (k1, l1), ca in a.cells.items():
        for (k2, l2), cb in b.cells.items():
            l = l1 + l2
            if l > lmax:
                continue
            k = k1 + k2
            if ca.rank is None or cb.rank is None:
                rank_unknown.add((k, l))
                torsion_unknown.update({(k, l), (k + 1, l)})
                continue
            ranks[(k, l)] = ranks.get((k, l), 0) + ca.rank * cb.rank
            if ca.torsion is None or cb.torsion is None:
                torsion_unknown.update({(k, l), (k + 1, l)})
                continue
            tensor = list(ca.torsion) * cb.rank + list(cb.torsion) * ca.rank
            tor = [gcd(m, n) for m in ca.torsion for n in cb.torsion]
            tors.setdefault((k, l), []).extend(tensor + tor)
            if tor:
                tors.setdefault((k + 1, l), []).extend(tor)
    cells = dict(table_from_ranks(lmax, ranks, {kl: _tors(v) for kl, v in tors.items()}, "kunneth").cells)
    for kl in (rank_unknown | torsion_unknown):
        if kl[1] <= lmax:
            rank = None if kl in rank_unknown else ranks.get(kl, 0)
            cells[kl] = Cell(rank, None, "kunneth")
    return BigradedGroup(lmax, cells)


def check_kunneth(g: Graph, h: Graph, lmax: int,
                  names: tuple[str | None, str | None] = (None, None)) -> CheckReport:
    t0 = time.perf_counter()
    rep = CheckReport("kunneth", (_describe(g, names[0]), _describe(h, names[1])), lmax)
    cmp = _Comparison(rep)
    tg, th = homology(g, lmax), homology(h, lmax)
    tp = homology(gr.box_product(g, h), lmax)
    expected = kunneth_expected(tg, th, lmax)
    if tg.torsion_cells() or th.torsion_cells():
        rep.notes.append("torsion branch exercised")
    for k, l in _all_cells(lmax):
        cmp.cell(k, l, tp.rank(k, l), expected.rank(k, l))
        cmp.torsion(k, l, _tors(tp.torsion(k, l)), _tors(expected.torsion(k, l)))
    return cmp.finish(t0)


def check_mayer_vietoris(x: Graph, gset: Iterable[int], hset: Iterable[int], lmax: int,
                         name: str | None = None, diagnose: bool = True) -> CheckReport:
    """Cellwise MH(G) + MH(H) = MH(X) + MH(G meet H) for a projecting decomposition.

    Raises :class:`~maghom.graph.CoverError` if the sets do not cover ``x``.
    When the decomposition is not projecting the verdict is inapplicable; with
    ``diagnose`` the rank identity is still evaluated and any failing cells are
    recorded in the notes.
    """
    t0 = time.perf_counter()
    gset, hset = sorted(set(gset)), sorted(set(hset))
    rep = CheckReport("mayer-vietoris", (_describe(x, name), f"G={gset}", f"H={hset}"), lmax)
    ok, dec, reason = gr.is_projecting_decomposition(x, gset, hset)
    tx, tg, th, tm = (homology(y, lmax) for y in (x, dec.g, dec.h, dec.meet))
    if not ok:
        if diagnose:
            for k, l in _all_cells(lmax):
                lhs = _add(tg.rank(k, l), th.rank(k, l))
                rhs = _add(tx.rank(k, l), tm.rank(k, l))
                if lhs != rhs:
                    rep.notes.append(
                        f"rank identity fails at (k={k}, l={l}): rank MH(X)={tx.rank(k, l)}, "
                        f"expected {_add(lhs, -tm.rank(k, l))}")
        return _inapplicable(rep, reason, t0)
    cmp = _Comparison(rep)
    for k, l in _all_cells(lmax):
        cmp.cell(k, l, _add(tg.rank(k, l), th.rank(k, l)), _add(tx.rank(k, l), tm.rank(k, l)))
        cmp.torsion(k, l, _sum_tors(tg.torsion(k, l), th.torsion(k, l)),
                    _sum_tors(tx.torsion(k, l), tm.torsion(k, l)))
    sx, sg, sh, sm = (magnitude_by_counting(y, lmax) for y in (x, dec.g, dec.h, dec.meet))
    for l in range(lmax + 1):
        cmp.cell(None, l, sx[l], sg[l] + sh[l] - sm[l], "magnitude coefficient")
    return cmp.finish(t0)


def is_tree(g: Graph) -> bool:
    return g.n >= 1 and g.num_edges == g.n - 1 and g.is_connected()


def check_tree_formula(t: Graph, lmax: int, name: str | None = None) -> CheckReport:
    t0 = time.perf_counter()
    rep = CheckReport("tree-formula", (_describe(t, name),), lmax)
    if not is_tree(t):
        return _inapplicable(rep, "graph is not a tree", t0)
    cmp = _Comparison(rep)
    table = homology(t, lmax)
    for k, l in _all_cells(lmax):
        if k == l == 0:
            want = t.n
        elif k == l:
            want = 2 * t.num_edges
        else:
            want = 0
        cmp.cell(k, l, table.rank(k, l), want)
        cmp.torsion(k, l, _tors(table.torsion(k, l)), ())
    return cmp.finish(t0)


def check_join_diagonal(g: Graph, h: Graph, lmax: int,
                        names: tuple[str | None, str | None] = (None, None)) -> CheckReport:
    t0 = time.perf_counter()
    graphs = (_describe(g, names[0]), _describe(h, names[1]))
    if g.n == 0 or h.n == 0:
        return _inapplicable(CheckReport("join-diagonal", graphs, lmax), "both graphs must be nonempty", t0)
    rep = check_diagonal(gr.join(g, h), lmax)
    rep.name = "join-diagonal"
    rep.graphs = graphs
    rep.elapsed = time.perf_counter() - t0
    return rep


def cyclic_conjecture_table(n: int, lmax: int) -> dict[tuple[int, int], int]:
    """Conjectured ranks of MH(C_n) by diagonals, overlapping diagonals summed.

    Odd n: diagonal i starts at (2(i-1), (i-1)(n+1)/2) and its j-th entry is
    T_{i,j} with T_{1,1}=n, T_{1,2}=2n, T_{i,j}=T_{i,j-1}+2T_{i-1,j}.
    Even n: diagonal i starts at (2(i-1), (i-1)n/2) with entries n, 2n, 2n, ...
    Entry j sits at the start shifted by (j-1, j-1).
    """
    if n < 3:
        raise ValueError("cycles need n >= 3")
    table: dict[tuple[int, int], int] = {}
    i = 1
    while True:
        k0 = 2 * (i - 1)
        l0 = (i - 1) * (n + 1) // 2 if n % 2 else (i - 1) * n // 2
        if l0 > lmax:
            break
        for j in range(1, lmax - l0 + 2):
            if n % 2:
                val = _odd_entry(n, i, j)
            else:
                val = n if j == 1 else 2 * n
            kl = (k0 + j - 1, l0 + j - 1)
            table[kl] = table.get(kl, 0) + val
        i += 1
    return table


@lru_cache(maxsize=None)
def _odd_entry(n: int, i: int, j: int) -> int:
    if i < 1 or j < 1:
        return 0
    if i == 1:
        return n if j == 1 else 2 * n
    return _odd_entry(n, i, j - 1) + 2 * _odd_entry(n, i - 1, j)


def check_cyclic_patterns(n: int, lmax: int) -> CheckReport:
    t0 = time.perf_counter()
    rep = CheckReport("cyclic-patterns", (f"C_{n}",), lmax)
    cmp = _Comparison(rep)
    conj = cyclic_conjecture_table(n, lmax)
    table = homology(gr.cycle(n), lmax)
    for k, l in _all_cells(lmax):
        cmp.cell(k, l, table.rank(k, l), conj.get((k, l), 0))
    out = cmp.finish(t0)
    if out.passed:
        out.notes.append(f"consistent with conjecture up to l={lmax} (not a proof)")
    else:
        out.notes.append("computed table disagrees with the conjectured pattern")
    return out


def check_support_bounds(g: Graph, lmax: int, name: str | None = None) -> CheckReport:
    """Nonzero cells satisfy k <= l and l/d <= k, strictly if d > 1 and l > 0."""
    t0 = time.perf_counter()
    rep = CheckReport("support-bounds", (_describe(g, name),), lmax)
    cmp = _Comparison(rep)
    d = g.diameter
    table = homology(g, lmax)
    for (k, l), c in table.cells.items():
        if not (c.rank or c.torsion):
            continue
        ok = k <= l
        if d == 0:
            ok = ok and l == 0
        elif d > 1 and l > 0:
            ok = ok and l < d * k
        else:
            ok = ok and l <= d * k
        cmp.cell(k, l, True, ok, "support")
    return cmp.finish(t0)


def check_automorphism_action(g: Graph, vmap, k: int = 1, l: int = 1,
                              name: str | None = None) -> CheckReport:
    """The induced chain map of an automorphism is a permutation of matching order."""
    t0 = time.perf_counter()
    rep = CheckReport("automorphism-action", (_describe(g, name),), l)
    f = gr.validate_graph_map(g, g, vmap)
    order = _order(f.vmap)
    m = induced_chain_map(f, k, l)
    cmp = _Comparison(rep)
    is_perm = all(len(c) == 1 and next(iter(c.values())) == 1 for c in m.columns) and len(
        {next(iter(c)) for c in m.columns}) == m.cols
    cmp.cell(k, l, is_perm, True, "permutation")
    if is_perm:
        perm = [next(iter(c)) for c in m.columns]
        cmp.cell(k, l, order % _order(perm), 0, "order divides")
    return cmp.finish(t0)


def _order(perm) -> int:
    seen = [False] * len(perm)
    out = 1
    for s in range(len(perm)):
        length = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        if length:
            out = lcm(out, length)
    return out


CHECKS = {
    "diagonal": check_diagonal,
    "disjoint-additivity": check_disjoint_additivity,
    "kunneth": check_kunneth,
    "mayer-vietoris": check_mayer_vietoris,
    "tree-formula": check_tree_formula,
    "join-diagonal": check_join_diagonal,
    "cyclic-patterns": check_cyclic_patterns,
    "support-bounds": check_support_bounds,
}
