"""Magnitude chain groups MC_{k,l}(G): generators, differentials, chain maps.

A generator is a vertex tuple ``(x_0, ..., x_k)`` with consecutive entries
distinct and total path length ``l``.  Bases are always sorted
lexicographically.  Chains are ``{trail: coefficient}`` dicts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .graph import INF, Graph, GraphMap
from .linalg import SparseIntMatrix

Trail = tuple  # (x_0, ..., x_k)


def trail_length(g: Graph, trail) -> int:
    d = g.distances
    return sum(d[a, b] for a, b in zip(trail, trail[1:]))


def is_trail(g: Graph, trail) -> bool:
    if not trail or any(not 0 <= x < g.n for x in trail):
        return False
    if any(a == b for a, b in zip(trail, trail[1:])):
        return False
    return trail_length(g, trail) is not INF


@lru_cache(maxsize=64)
def neighbours_by_distance(g: Graph) -> tuple[tuple[tuple[int, int], ...], ...]:
    """For each vertex, the other vertices of its component with their distance."""
    d = g.distances
    return tuple(
        tuple((u, d[v, u]) for u in range(g.n) if u != v and d[v, u] is not INF)
        for v in range(g.n)
    )


@dataclass(frozen=True)
class GeneratorBasis:
    graph: Graph
    k: int
    l: int
    trails: tuple
    index: dict = field(compare=False, repr=False)

    def __len__(self):
        return len(self.trails)

    def __iter__(self):
        return iter(self.trails)


def _walk(nbrs, start, k, l):
    """Yield trails from ``start`` with exactly ``k`` steps and length ``l`` in lex order."""
    if k == 0:
        if l == 0:
            yield (start,)
        return
    stack = [start]

    def rec(x, steps_left, budget):
        if steps_left == 1:
            for u, du in nbrs[x]:
                if du == budget:
                    stack.append(u)
                    yield tuple(stack)
                    stack.pop()
            return
        # each later step costs at least 1
        cap = budget - (steps_left - 1)
        for u, du in nbrs[x]:
            if du <= cap:
                stack.append(u)
                yield from rec(u, steps_left - 1, budget - du)
                stack.pop()

    yield from rec(start, k, l)


@lru_cache(maxsize=256)
def enumerate_generators(g: Graph, k: int, l: int) -> GeneratorBasis:
    if k < 0 or l < 0:
        raise ValueError("k and l must be nonnegative")
    trails = []
    if k <= l:
        nbrs = neighbours_by_distance(g)
        for a in range(g.n):
            trails.extend(_walk(nbrs, a, k, l))
    trails = tuple(trails)
    return GeneratorBasis(g, k, l, trails, {t: i for i, t in enumerate(trails)})


def chain_rank_table(g: Graph, lmax: int) -> dict[tuple[int, int], int]:
    """``|MC_{k,l}(G)|`` for ``k <= l <= lmax`` by dynamic programming (no enumeration).

    Zero counts are omitted.
    """
    nbrs = neighbours_by_distance(g)
    # ways[k][l][v]: tuples with k steps, length l, ending at v
    ways = {(0, 0): [1] * g.n}
    table = {}
    if g.n:
        table[(0, 0)] = g.n
    for k in range(1, lmax + 1):
        for l in range(k, lmax + 1):
            acc = [0] * g.n
            hit = False
            for prev_l in range(k - 1, l):
                prev = ways.get((k - 1, prev_l))
                if prev is None:
                    continue
                step = l - prev_l
                for x in range(g.n):
                    c = prev[x]
                    if not c:
                        continue
                    for u, du in nbrs[x]:
                        if du == step:
                            acc[u] += c
                            hit = True
            if hit:
                ways[(k, l)] = acc
                total = sum(acc)
                if total:
                    table[(k, l)] = total
    return table


def faces(g: Graph, trail):
    """Nonzero terms of the differential: ``(sign, face)`` pairs.

    Deleting interior entry ``x_i`` contributes ``(-1)^(i-1)`` when
    ``d(x_{i-1}, x_i) + d(x_i, x_{i+1}) = d(x_{i-1}, x_{i+1})``.
    """
    d = g.distances
    out = []
    for i in range(1, len(trail) - 1):
        a, x, b = trail[i - 1], trail[i], trail[i + 1]
        if a != b and d[a, x] + d[x, b] == d[a, b]:
            out.append((1 if i % 2 else -1, trail[:i] + trail[i + 1:]))
    return out


def boundary_of_chain(g: Graph, chain: dict) -> dict:
    out: dict = {}
    for t, c in chain.items():
        for s, f in faces(g, t):
            out[f] = out.get(f, 0) + s * c
    return {t: c for t, c in out.items() if c}


def boundary_matrix(g: Graph, k: int, l: int) -> SparseIntMatrix:
    """Matrix of the differential MC_{k,l} -> MC_{k-1,l} in the lexicographic bases."""
    if k < 1:
        raise ValueError("the differential starts in degree 1")
    src = enumerate_generators(g, k, l)
    dst = enumerate_generators(g, k - 1, l)
    return _boundary_block(g, src.trails, dst.index)


def _boundary_block(g: Graph, trails, target_index) -> SparseIntMatrix:
    columns = []
    for t in trails:
        col = {}
        for s, f in faces(g, t):
            r = target_index[f]
            col[r] = col.get(r, 0) + s
        columns.append(col)
    return SparseIntMatrix(len(target_index), len(trails), columns)


def apply_map(f: GraphMap, chain: dict) -> dict:
    """f_# on a chain: keep the image tuple only where length is preserved."""
    dg, dh = f.source.distances, f.target.distances
    out: dict = {}
    for t, c in chain.items():
        img = tuple(f.vmap[x] for x in t)
        lg = sum(dg[a, b] for a, b in zip(t, t[1:]))
        lh = sum(dh[a, b] for a, b in zip(img, img[1:]))
        if lh == lg:
            out[img] = out.get(img, 0) + c
    return {t: c for t, c in out.items() if c}


def induced_chain_map(f: GraphMap, k: int, l: int) -> SparseIntMatrix:
    src = enumerate_generators(f.source, k, l)
    dst = enumerate_generators(f.target, k, l)
    columns = []
    for t in src.trails:
        img = apply_map(f, {t: 1})
        columns.append({dst.index[s]: c for s, c in img.items()})
    return SparseIntMatrix(len(dst), len(src), columns)


# ---------------------------------------------------------------------------
# exterior product
# ---------------------------------------------------------------------------

def _shuffles(k1: int, k2: int):
    """Monotone lattice paths (0,0) -> (k1,k2) with their signs.

    The sign is ``(-1)^n`` where ``n`` counts the unit squares below the path,
    i.e. pairs of steps where a second-factor step precedes a first-factor step.
    """
    total = k1 + k2
    for second_steps in combinations(range(total), k2):
        chosen = set(second_steps)
        inversions = 0
        seen_second = 0
        path = [(0, 0)]
        i = j = 0
        for s in range(total):
            if s in chosen:
                j += 1
                seen_second += 1
            else:
                i += 1
                inversions += seen_second
            path.append((i, j))
        yield (-1 if inversions % 2 else 1), path


def exterior_product(a, b, h_size: int) -> dict:
    """Exterior product of trails ``a`` in G and ``b`` in H as a chain in G box H.

    Product vertices use the box-product numbering ``x * h_size + y``.
    """
    out: dict = {}
    for sign, path in _shuffles(len(a) - 1, len(b) - 1):
        t = tuple(a[i] * h_size + b[j] for i, j in path)
        out[t] = out.get(t, 0) + sign
    return {t: c for t, c in out.items() if c}


def exterior_product_chains(x: dict, y: dict, h_size: int) -> dict:
    out: dict = {}
    for a, ca in x.items():
        for b, cb in y.items():
            for t, c in exterior_product(a, b, h_size).items():
                out[t] = out.get(t, 0) + ca * cb * c
    return {t: c for t, c in out.items() if c}


# ---------------------------------------------------------------------------
# per-endpoint blocks (used by the homology engine)
# ---------------------------------------------------------------------------

def trails_by_endpoints(g: Graph, l: int) -> dict[tuple[int, int], dict[int, list]]:
    """All generators of length ``l`` grouped by ``(x_0, x_k)`` and then by ``k``.

    The differential never removes endpoints, so MC_{*,l} splits as a direct
    sum over endpoint pairs.  Within a block each list is lexicographic.
    """
    nbrs = neighbours_by_distance(g)
    blocks: dict[tuple[int, int], dict[int, list]] = {}
    if l == 0:
        for a in range(g.n):
            blocks[(a, a)] = {0: [(a,)]}
        return blocks
    for a in range(g.n):
        stack = [a]

        def rec(x, budget):
            for u, du in nbrs[x]:
                if du > budget:
                    continue
                stack.append(u)
                if du == budget:
                    t = tuple(stack)
                    blocks.setdefault((a, u), {}).setdefault(len(t) - 1, []).append(t)
                else:
                    rec(u, budget - du)
                stack.pop()

        rec(a, l)
    return blocks


def block_boundary(g: Graph, source: list, target: list) -> SparseIntMatrix:
    index = {t: i for i, t in enumerate(target)}
    return _boundary_block(g, source, index)
