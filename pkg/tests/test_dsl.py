import pytest
from hypothesis import given, settings, strategies as st

from maghom import graph as gr
from maghom.dsl import (
    BinOp, DslError, EdgeList, Family, Lcf, Wedge,
    evaluate, load_graph, parse_edge_list, parse_expr, parse_lcf, to_text,
)
from maghom.graph import GraphError


def test_family_forms():
    assert load_graph("C(5)") == gr.cycle(5)
    assert load_graph("K(4)") == gr.complete(4)
    assert load_graph("petersen") == gr.petersen()


def test_precedence_join_binds_tightest():
    e = parse_expr("K(1) + K(2) box K(3) * E(2)")
    assert e == BinOp("+", Family("complete", (1,)),
                      BinOp("box", Family("complete", (2,)),
                            BinOp("*", Family("complete", (3,)), Family("discrete", (2,)))))


def test_parentheses_override():
    e = parse_expr("(K(1) + K(2)) * E(1)")
    assert e.op == "*" and e.left.op == "+"


def test_box_product_value():
    assert load_graph("K(2) box K(2)") == gr.box_product(gr.complete(2), gr.complete(2))


def test_wedge_expression():
    assert load_graph("wedge(C(5), 0, C(5), 0)") == gr.wedge(gr.cycle(5), 0, gr.cycle(5), 0)


def test_edge_literal_and_lcf_literal():
    assert parse_expr("[0-1, 1-2, n=4]") == EdgeList(4, ((0, 1), (1, 2)))
    assert parse_expr("[5,-5]^7") == Lcf((5, -5), 7)
    assert load_graph("[0-1, 1-2, n=4]").n == 4
    assert load_graph("[5,-5]^7") == gr.heawood()
    assert parse_lcf("lcf([5, -5]^7)") == gr.heawood()


def test_edge_list_file_format(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("# two pentagons\nn=8\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n7 0\n0 4\n")
    g = load_graph(str(f))
    assert g.n == 8 and g.num_edges == 9


@pytest.mark.parametrize("text, fragment", [
    ("0 0\n", "loop"),
    ("0 1\n1 0\n", "duplicate"),
    ("0 -1\n", "negative"),
    ("0 1 2\n", "expected"),
])
def test_edge_list_errors(text, fragment):
    with pytest.raises(DslError, match=fragment):
        parse_edge_list(text)


def test_error_positions():
    with pytest.raises(DslError) as info:
        parse_expr("C(5) + \n  $")
    assert info.value.line == 2 and info.value.column == 3


@pytest.mark.parametrize("text", ["C(", "C(5) +", "wedge(C(5), 0)", "[1,2", "K(2) box", ""])
def test_malformed_expressions(text):
    with pytest.raises(DslError):
        parse_expr(text)


def test_semantic_errors_surface_as_dsl_errors():
    with pytest.raises(DslError):
        load_graph("wedge(C(3), 7, C(3), 0)")
    with pytest.raises(DslError):
        load_graph("[2]^3")


# expression round trip

# the parser stores canonical family names
_families = st.sampled_from(["complete", "cycle", "path", "discrete"]).flatmap(
    lambda f: st.integers(3 if f == "cycle" else 1, 4).map(lambda n: Family(f, (n,))))
_lcfs = st.builds(Lcf, st.lists(st.integers(-5, 5), min_size=1, max_size=3).map(tuple),
                  st.integers(1, 4))
_edges = st.builds(EdgeList, st.one_of(st.none(), st.integers(0, 6)),
                   st.lists(st.tuples(st.integers(0, 3), st.integers(4, 6)),
                            max_size=3, unique=True).map(tuple))
_leaves = st.one_of(_families, _lcfs, _edges)


def _extend(children):
    return st.one_of(
        st.builds(BinOp, st.sampled_from(["+", "box", "*"]), children, children),
        st.builds(Wedge, children, st.integers(0, 3), children, st.integers(0, 3)),
    )


expressions = st.recursive(_leaves, _extend, max_leaves=6)


@given(expressions)
@settings(max_examples=200, deadline=None)
def test_round_trip(expr):
    assert parse_expr(to_text(expr)) == expr


@given(st.text(alphabet="KCPEbox()[]^,+-*=0123456789 \nwedgelcf$", max_size=30))
@settings(max_examples=400, deadline=None)
def test_fuzz_never_crashes(text):
    try:
        evaluate(parse_expr(text))
    except (DslError, GraphError):
        pass


@given(st.binary(max_size=40))
@settings(max_examples=300, deadline=None)
def test_arbitrary_bytes_never_crash(data):
    try:
        evaluate(parse_expr(data.decode("latin-1")))
    except (DslError, GraphError):
        pass


def test_documented_examples():
    octa = load_graph("E(2) * E(2) * E(2)")
    assert parse_expr("E(2) * E(2) * E(2)").left.op == "*"
    assert octa.n == 6 and octa.num_edges == 12 and all(octa.degree(v) == 4 for v in range(6))
    cube = load_graph("K(2) box K(2) box K(2)")
    assert cube.n == 8 and cube.num_edges == 12 and all(cube.degree(v) == 3 for v in range(8))
    two = load_graph("C(5) + C(5)")
    assert two.n == 10 and len(two.components) == 2
    square = load_graph("K(2) box K(2)")
    assert square.is_connected() and all(square.degree(v) == 2 for v in range(4))
    assert load_graph("E(1)") == gr.complete(1)
    assert load_graph("wedge(K(2),1,K(2),0)") == gr.path(3)


def test_lcf_examples():
    tc = parse_lcf("[-13,-9,7,-7,9,13]^5")
    assert tc.n == 30 and tc.num_edges == 45 and all(tc.degree(v) == 3 for v in range(30))
    mk = parse_lcf("[5,-5]^4")
    assert mk.n == 8 and mk.num_edges == 12 and all(mk.degree(v) == 3 for v in range(8))
    with pytest.raises(GraphError):
        parse_lcf("[2]^3")


def test_edge_list_examples():
    assert parse_edge_list("0 1\n1 2") == gr.path(3)
    g = parse_edge_list("n=3\n0 1")
    assert g.n == 3 and g.edges == ((0, 1),)


def test_precedence_on_vertex_counts():
    # A + B box C = A + (B box C)
    assert load_graph("K(1) + K(2) box K(3)").n == 1 + 6
    assert load_graph("(K(1) + K(2)) box K(3)").n == 9


def test_names_case_insensitive():
    assert load_graph("c(5)") == load_graph("Cycle(5)") == gr.cycle(5)
    assert load_graph("empty(2)") == gr.discrete(2)
    assert load_graph("PETERSEN") == gr.petersen()
