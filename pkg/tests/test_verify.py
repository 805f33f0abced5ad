import json

import pytest

from maghom import graph as gr
from maghom.cli import two_pentagons
from maghom.graph import CoverError
from maghom.homology import table_from_ranks
from maghom.verify import (
    FAIL, INAPPLICABLE, PASS, PASS_RANKS_ONLY, check_automorphism_action, check_cyclic_patterns,
    check_diagonal, check_disjoint_additivity, check_join_diagonal, check_kunneth,
    check_mayer_vietoris, check_support_bounds, check_tree_formula, cyclic_conjecture_table,
    kunneth_expected,
)

from reference_tables import C5_HOMOLOGY


def test_complete_graph_is_diagonal():
    rep = check_diagonal(gr.complete(4), 4)
    assert rep.verdict == PASS and rep.exit_code == 0
    assert rep.cells


def test_pentagon_is_not_diagonal():
    rep = check_diagonal(gr.cycle(5), 4, "C5")
    assert rep.verdict == FAIL and rep.exit_code == 1
    assert any(d["k"] == 2 and d["l"] == 3 for d in rep.diffs)
    assert "mismatch at (k=2, l=3)" in rep.summary()


def test_report_serialises():
    rep = check_tree_formula(gr.path(4), 3)
    d = json.loads(json.dumps(rep.to_dict()))
    assert d["verdict"] == PASS and d["graphs"] == [rep.graphs[0]]


def test_disjoint_additivity():
    assert check_disjoint_additivity(gr.cycle(5), gr.complete(3), 4).passed


def test_kunneth_square_and_pentagon_path():
    assert check_kunneth(gr.complete(2), gr.complete(2), 5).verdict == PASS
    assert check_kunneth(gr.cycle(5), gr.path(2), 4).verdict == PASS


def test_kunneth_expected_torsion_arithmetic():
    # MH(G) = Z at (0,0) and Z/2 at (1,1); MH(H) = Z/2 + Z/3 at (1,1)
    a = table_from_ranks(3, {(0, 0): 1}, {(1, 1): [2]})
    b = table_from_ranks(3, {(0, 0): 1}, {(1, 1): [2, 3]})
    e = kunneth_expected(a, b, 3)
    # tensor: Z/2 from a, Z/2 + Z/3 from b at (1,1)
    assert e.rank(1, 1) == 0 and sorted(e.torsion(1, 1)) == [2, 6]
    # (1,1)x(1,1) at (2,2): Z/2 (x) (Z/2 + Z/3) = Z/2
    # Tor lands one degree up at (3,2)
    assert e.torsion(2, 2) == (2,)
    assert e.torsion(3, 2) == (2,)


def test_kunneth_expected_unknown_cells():
    a = table_from_ranks(2, {(0, 0): 1, (1, 1): 2})
    b = table_from_ranks(2, {(0, 0): 1, (1, 1): 2}, method="modular")
    cells = dict(b.cells)
    from maghom.homology import Cell
    cells[(1, 1)] = Cell(2, None, "modular")
    b = type(b)(2, cells)
    e = kunneth_expected(a, b, 2)
    assert e.rank(2, 2) == 4 and e.torsion(2, 2) is None and e.torsion(1, 1) is None


def test_mayer_vietoris_on_wedge():
    w = gr.wedge(gr.cycle(5), 0, gr.cycle(4), 0)
    rep = check_mayer_vietoris(w, range(5), [0, 5, 6, 7], 4)
    assert rep.verdict == PASS
    assert any(c["what"] == "magnitude coefficient" for c in rep.cells)


def test_mayer_vietoris_counterexample_is_inapplicable():
    rep = check_mayer_vietoris(two_pentagons(), [0, 1, 2, 3, 4], [4, 5, 6, 7, 0], 4)
    assert rep.verdict == INAPPLICABLE and rep.exit_code == 2
    assert any("(k=2, l=4)" in n for n in rep.notes)


def test_mayer_vietoris_requires_cover():
    with pytest.raises(CoverError):
        check_mayer_vietoris(gr.cycle(5), [0, 1], [2, 3], 2)


def test_tree_formula():
    assert check_tree_formula(gr.star(4), 4).verdict == PASS
    assert check_tree_formula(gr.cycle(4), 3).verdict == INAPPLICABLE


def test_join_diagonal():
    assert check_join_diagonal(gr.cycle(5), gr.discrete(1), 3).verdict == PASS
    assert check_join_diagonal(gr.discrete(0), gr.complete(2), 3).verdict == INAPPLICABLE


def test_cyclic_conjecture_table_for_pentagon():
    conj = cyclic_conjecture_table(5, 11)
    assert conj == C5_HOMOLOGY


def test_cyclic_conjecture_small_cycles_sum_overlaps():
    assert check_cyclic_patterns(4, 6).verdict == PASS
    assert check_cyclic_patterns(3, 5).verdict == PASS
    assert check_cyclic_patterns(6, 6).verdict == PASS


def test_support_bounds():
    for g in (gr.cycle(6), gr.petersen(), gr.discrete(3), gr.complete(3)):
        assert check_support_bounds(g, 4).verdict == PASS


def test_automorphism_action():
    rep = check_automorphism_action(gr.cycle(5), [1, 2, 3, 4, 0], k=2, l=2)
    assert rep.verdict == PASS


def test_ranks_only_when_torsion_missing(monkeypatch):
    from maghom import verify
    from maghom.homology import compute_homology

    def rank_only(g, lmax):
        return compute_homology(g, lmax, torsion=False)
    monkeypatch.setattr(verify, "homology", rank_only)
    # C4 is diagonal but has off-diagonal chains whose torsion is now unknown
    assert verify.check_diagonal(gr.cycle(4), 3).verdict == PASS_RANKS_ONLY
