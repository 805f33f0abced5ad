import pickle

import networkx as nx
import pytest

from maghom import graph as gr
from maghom.graph import INF, Graph, GraphError


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def test_infinity_arithmetic():
    assert INF + 3 == INF
    assert 3 + INF == INF
    assert 10**9 < INF
    assert not INF < INF
    assert pickle.loads(pickle.dumps(INF)) is INF


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph(3, ((0, 0),))
    with pytest.raises(GraphError):
        Graph.from_edges([(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph(2, ((0, 2),))


def test_edges_normalised():
    g = Graph.from_edges([(2, 1), (0, 1)])
    assert g.edges == ((0, 1), (1, 2))
    assert g.has_edge(2, 1) and not g.has_edge(0, 2)


def test_distances_match_networkx():
    g = gr.petersen()
    expected = dict(nx.all_pairs_shortest_path_length(to_nx(g)))
    for x in range(g.n):
        for y in range(g.n):
            assert g.distances[x, y] == expected[x][y]
    assert g.diameter == 2


def test_disconnected_distance_is_infinite():
    g = gr.disjoint_union(gr.complete(2), gr.complete(2))
    assert g.distances[0, 2] is INF
    assert len(g.components) == 2
    assert g.diameter == 1


@pytest.mark.parametrize("name, builder, reference", [
    ("petersen", gr.petersen, nx.petersen_graph),
    ("heawood", gr.heawood, nx.heawood_graph),
    ("pappus", gr.pappus, nx.pappus_graph),
    ("moebius_kantor", gr.moebius_kantor, nx.moebius_kantor_graph),
    ("tutte_coxeter", gr.tutte_coxeter, lambda: nx.LCF_graph(30, [-13, -9, 7, -7, 9, 13], 5)),
    ("dodecahedral", gr.dodecahedral, nx.dodecahedral_graph),
    ("icosahedral", gr.icosahedral, nx.icosahedral_graph),
])
def test_named_graphs_isomorphic_to_reference(name, builder, reference):
    assert nx.is_isomorphic(to_nx(builder()), reference())


def test_tutte_coxeter_girth():
    assert nx.girth(to_nx(gr.tutte_coxeter())) == 8


def test_lcf_rejections():
    with pytest.raises(GraphError, match="loop"):
        gr.lcf_graph([0], 4)
    with pytest.raises(GraphError, match="duplicates a cycle edge"):
        gr.lcf_graph([2], 3)
    with pytest.raises(GraphError):
        gr.lcf_graph([2, 2], 3)


def test_build_named_aliases():
    assert gr.build_named("C", 5) == gr.cycle(5)
    assert gr.build_named("K", 3) == gr.complete(3)
    assert gr.build_named("E", 2) == gr.discrete(2)
    with pytest.raises(GraphError):
        gr.build_named("nosuch", 1)


def test_box_product_numbering():
    g = gr.box_product(gr.complete(2), gr.path(3))
    assert g.n == 6
    # (x, y) -> x*3 + y
    assert g.has_edge(0, 3) and g.has_edge(0, 1) and not g.has_edge(0, 4)
    assert nx.is_isomorphic(to_nx(g), nx.grid_2d_graph(2, 3))


def test_join_and_union_sizes():
    g, h = gr.cycle(5), gr.path(3)
    j = gr.join(g, h)
    assert j.n == 8 and j.num_edges == 5 + 2 + 15
    u = gr.disjoint_union(g, h)
    assert u.n == 8 and u.num_edges == 7


def test_wedge_identifies_basepoints():
    w = gr.wedge(gr.cycle(5), 0, gr.cycle(5), 0)
    assert w.n == 9 and w.num_edges == 10
    assert w.degree(0) == 4


def test_convexity_and_projection():
    c6 = gr.cycle(6)
    assert gr.is_convex(c6, [0, 1, 2])
    assert not gr.is_convex(c6, [0, 2])
    # 4 is nearest to 3 but d(4, 0) = 2 does not pass through 3
    assert gr.projection(c6, [0, 1, 2, 3]) is None
    p = gr.projection(gr.path(4), [0, 1])
    assert p == {0: 0, 1: 1, 2: 1, 3: 1}
    with pytest.raises(GraphError):
        gr.projection(c6, [0, 2])


def test_projecting_decomposition_of_wedge():
    w = gr.wedge(gr.cycle(5), 0, gr.cycle(4), 0)
    ok, _, _ = gr.is_projecting_decomposition(w, range(5), [0, 5, 6, 7])
    assert ok


def test_two_pentagons_not_projecting():
    from maghom.cli import two_pentagons
    x = two_pentagons()
    ok, _, reason = gr.is_projecting_decomposition(x, [0, 1, 2, 3, 4], [4, 5, 6, 7, 0])
    assert not ok and reason


def test_decompose_requires_cover():
    with pytest.raises(gr.CoverError):
        gr.decompose(gr.cycle(5), [0, 1], [2, 3])


def test_graph_maps_compose():
    c6, c3 = gr.cycle(6), gr.cycle(3)
    f = gr.validate_graph_map(c6, c3, [i % 3 for i in range(6)])
    g = gr.validate_graph_map(c3, c3, [1, 2, 0])
    assert g.compose(f).vmap == tuple((i % 3 + 1) % 3 for i in range(6))
    with pytest.raises(GraphError):
        gr.validate_graph_map(gr.path(3), gr.discrete(3), [0, 1, 2])


def test_structural_hash_ignores_labels():
    a = Graph(2, ((0, 1),), labels=("a", "b"))
    b = Graph(2, ((0, 1),))
    assert a == b and a.structural_hash == b.structural_hash
    assert a.structural_hash != gr.discrete(2).structural_hash
