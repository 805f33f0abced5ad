import itertools
import random

import pytest

from maghom import graph as gr
from maghom.chains import (
    apply_map, boundary_matrix, boundary_of_chain, chain_rank_table, enumerate_generators,
    exterior_product, exterior_product_chains, faces, induced_chain_map, is_trail,
    trail_length, trails_by_endpoints,
)
from maghom.graph import INF
from maghom.linalg import multiply

from conftest import random_graph, random_map


def brute_generators(g, k, l):
    """Every (k+1)-tuple with distinct neighbours and finite length l, by itertools."""
    d = g.distances
    out = []
    for t in itertools.product(range(g.n), repeat=k + 1):
        if any(a == b for a, b in zip(t, t[1:])):
            continue
        steps = [d[a, b] for a, b in zip(t, t[1:])]
        if any(s is INF for s in steps):
            continue
        if sum(steps) == l:
            out.append(t)
    return out


GRAPHS = [
    ("C5", gr.cycle(5)),
    ("P4", gr.path(4)),
    ("K3+K2", gr.disjoint_union(gr.complete(3), gr.complete(2))),
    ("K2*E2", gr.join(gr.complete(2), gr.discrete(2))),
    ("star3", gr.star(3)),
]


@pytest.mark.parametrize("name, g", GRAPHS)
def test_enumeration_matches_brute_force(name, g):
    for l in range(5):
        for k in range(l + 1):
            basis = enumerate_generators(g, k, l)
            assert list(basis.trails) == brute_generators(g, k, l)


@pytest.mark.parametrize("name, g", GRAPHS)
def test_counting_table_matches_enumeration(name, g):
    table = chain_rank_table(g, 5)
    for l in range(6):
        for k in range(l + 1):
            assert table.get((k, l), 0) == len(enumerate_generators(g, k, l))


def test_trail_predicates():
    c5 = gr.cycle(5)
    assert is_trail(c5, (0, 2, 4))
    assert not is_trail(c5, (0, 0, 1))
    assert trail_length(c5, (0, 2, 4)) == 4


def test_faces_on_pentagon():
    c5 = gr.cycle(5)
    # 1 lies between 0 and 2, so it is removable; 3 is not between 2 and 0
    assert faces(c5, (0, 1, 2)) == [(1, (0, 2))]
    assert faces(c5, (0, 1, 0)) == []
    assert faces(c5, (0, 1, 2, 3)) == [(1, (0, 2, 3)), (-1, (0, 1, 3))]


@pytest.mark.parametrize("name, g", GRAPHS + [("C6", gr.cycle(6))])
def test_boundary_squares_to_zero(name, g):
    for l in range(1, 6):
        for k in range(2, l + 1):
            d1 = boundary_matrix(g, k - 1, l)
            d2 = boundary_matrix(g, k, l)
            assert multiply(d1, d2).is_zero()


def test_block_decomposition_covers_generators():
    g = gr.petersen()
    for l in range(4):
        blocks = trails_by_endpoints(g, l)
        by_k = {}
        for parts in blocks.values():
            for k, ts in parts.items():
                by_k.setdefault(k, []).extend(ts)
        for k in range(l + 1):
            assert sorted(by_k.get(k, [])) == list(enumerate_generators(g, k, l).trails)


@pytest.mark.parametrize("seed", range(6))
def test_chain_maps_commute_with_boundary(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 5, 0.5)
    h = random_graph(rng, 4, 0.7)
    f = random_map(rng, g, h)
    if f is None:
        f = gr.validate_graph_map(g, gr.complete(1), [0] * g.n)
    for l in range(1, 5):
        for k in range(1, l + 1):
            lhs = multiply(boundary_matrix(f.target, k, l), induced_chain_map(f, k, l))
            rhs = multiply(induced_chain_map(f, k - 1, l), boundary_matrix(f.source, k, l))
            assert lhs == rhs


@pytest.mark.parametrize("seed", range(6))
def test_functoriality(seed):
    rng = random.Random(100 + seed)
    a, b, c = random_graph(rng, 5, 0.5), gr.cycle(5), gr.complete(3)
    f = random_map(rng, a, b) or gr.validate_graph_map(a, b, [0] * a.n)
    g = random_map(rng, b, c) or gr.validate_graph_map(b, c, [0] * b.n)
    gf = g.compose(f)
    for l in range(4):
        for k in range(l + 1):
            assert induced_chain_map(gf, k, l) == multiply(
                induced_chain_map(g, k, l), induced_chain_map(f, k, l))


def test_identity_map_is_identity():
    g = gr.cycle(5)
    ident = gr.validate_graph_map(g, g, range(5))
    chain = {(0, 1, 2): 3, (0, 4): -1}
    assert apply_map(ident, chain) == chain


def test_exterior_product_square():
    # first-factor step first is positive, the other order picks up a sign
    assert exterior_product((0, 1), (0, 1), 2) == {(0, 2, 3): 1, (0, 1, 3): -1}


@pytest.mark.parametrize("seed", range(8))
def test_leibniz_rule(seed):
    rng = random.Random(seed)
    g, h = gr.cycle(5), gr.path(3)
    box = gr.box_product(g, h)
    for _ in range(10):
        la, lb = rng.randint(0, 3), rng.randint(0, 3)
        ka, kb = rng.randint(0, la), rng.randint(0, lb)
        ta = enumerate_generators(g, ka, la).trails
        tb = enumerate_generators(h, kb, lb).trails
        if not ta or not tb:
            continue
        a, b = rng.choice(ta), rng.choice(tb)
        prod = exterior_product(a, b, h.n)
        lhs = boundary_of_chain(box, prod)
        first = exterior_product_chains(boundary_of_chain(g, {a: 1}), {b: 1}, h.n)
        second = exterior_product_chains({a: 1}, boundary_of_chain(h, {b: 1}), h.n)
        rhs = dict(first)
        sign = -1 if ka % 2 else 1
        for t, c in second.items():
            rhs[t] = rhs.get(t, 0) + sign * c
        assert lhs == {t: c for t, c in rhs.items() if c}


def test_exterior_product_is_length_additive():
    g, h = gr.cycle(5), gr.path(3)
    box = gr.box_product(g, h)
    for t in exterior_product((0, 2), (0, 1, 2), h.n):
        assert trail_length(box, t) == 2 + 2
