"""Finite simple graphs, their path metric, and the combinators used to build them.

Vertices are always the dense indices ``0..n-1``.  Every constructor documents
its vertex numbering because generator enumeration (and therefore every table
this package prints) depends on it.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, total_ordering
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Invalid graph data or an invalid argument to a graph operation."""


@total_ordering
class _Infinity:
    """Distance between vertices in different components.

    Saturating under addition and larger than every integer.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("maghom.INF")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def _normalise_edges(n: int, edges: Iterable[Sequence[int]]) -> tuple[tuple[int, int], ...]:
    seen = set()
    for e in edges:
        u, v = (int(x) for x in e)
        if u == v:
            raise GraphError(f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphError(f"duplicate edge {key}")
        seen.add(key)
    return tuple(sorted(seen))


@dataclass(frozen=True)
class Graph:
    """A finite simple undirected graph on vertices ``0..n-1``.

    ``edges`` is stored as a sorted tuple of pairs ``(u, v)`` with ``u < v``.
    Passing duplicate edges, loops or out-of-range endpoints raises
    :class:`GraphError`.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("vertex count must be nonnegative")
        object.__setattr__(self, "edges", _normalise_edges(self.n, self.edges))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != self.n:
                raise GraphError("need exactly one label per vertex")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_edges(cls, edges, n=None, labels=None) -> "Graph":
        edges = [tuple(e) for e in edges]
        if n is None:
            n = 1 + max((max(e) for e in edges), default=-1)
        return cls(n, tuple(edges), labels)

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def _edge_lookup(self) -> frozenset:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_lookup

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def distances(self) -> "DistMatrix":
        return distance_matrix(self)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components as sorted vertex tuples, ordered by least vertex."""
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adjacency[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        queue.append(y)
            out.append(tuple(sorted(comp)))
        return tuple(out)

    def is_connected(self) -> bool:
        return len(self.components) <= 1

    @cached_property
    def diameter(self):
        """Largest finite distance (0 for graphs without edges)."""
        return max((d for row in self.distances.rows for d in row if d is not INF), default=0)

    @cached_property
    def structural_hash(self) -> str:
        """Hash of ``(n, sorted edge list)``; sensitive to the vertex labelling."""
        payload = f"{self.n};" + ";".join(f"{u}-{v}" for u, v in self.edges)
        return hashlib.sha256(payload.encode()).hexdigest()

    def to_edge_list(self) -> str:
        lines = [f"n={self.n}"]
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


class DistMatrix:
    """All-pairs shortest path distances; entries are ints or :data:`INF`."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(tuple(r) for r in rows)

    def __getitem__(self, idx):
        x, y = idx
        return self.rows[x][y]

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        return isinstance(other, DistMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"DistMatrix({[list(r) for r in self.rows]})"

    def max_finite(self) -> int:
        return max((d for r in self.rows for d in r if d is not INF), default=0)


def distance_matrix(g: Graph) -> DistMatrix:
    """Breadth-first search from every vertex."""
    rows = []
    adj = g.adjacency
    for s in range(g.n):
        dist = [INF] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if dist[y] is INF:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        rows.append(dist)
    return DistMatrix(rows)


# ---------------------------------------------------------------------------
# named families
# ---------------------------------------------------------------------------

def complete(n: int) -> Graph:
    _require(n >= 0, "K_n needs n >= 0")
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def discrete(n: int) -> Graph:
    _require(n >= 0, "E_n needs n >= 0")
    return Graph(n)


def cycle(n: int) -> Graph:
    """C_n with vertex i adjacent to i+1 mod n."""
    _require(n >= 3, "C_n needs n >= 3")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    """P_n on n vertices 0-1-...-(n-1)."""
    _require(n >= 1, "P_n needs n >= 1")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def star(leaves: int) -> Graph:
    """Centre 0 joined to leaves 1..leaves."""
    _require(leaves >= 0, "star needs a nonnegative leaf count")
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def lcf_graph(jumps: Sequence[int], repeats: int) -> Graph:
    """Cubic graph from LCF data: Hamiltonian cycle 0..N-1 plus chords.

    Vertex ``v`` gets the chord to ``v + jumps[v % m]`` (mod ``N = m * repeats``).
    Chords must be loop-free, must not repeat a cycle edge, and must be
    consistent: the partner's own jump has to point back.
    """
    jumps = [int(j) for j in jumps]
    m = len(jumps)
    if m == 0 or repeats < 1:
        raise GraphError("LCF data needs at least one jump and a positive exponent")
    n = m * repeats
    if n < 3:
        raise GraphError("LCF graph needs at least 3 vertices")
    edges = {(i, (i + 1) % n) if i < (i + 1) % n else ((i + 1) % n, i) for i in range(n)}
    cycle_edges = set(edges)
    for v in range(n):
        j = jumps[v % m]
        w = (v + j) % n
        if w == v:
            raise GraphError(f"LCF jump {j} at vertex {v} makes a loop")
        key = (min(v, w), max(v, w))
        if key in cycle_edges:
            raise GraphError(f"LCF jump {j} at vertex {v} duplicates a cycle edge")
        if (w + jumps[w % m]) % n != v:
            raise GraphError(
                f"LCF jump {j} at vertex {v} reaches {w}, whose own jump does not return"
            )
        edges.add(key)
    if n % 2:  # pragma: no cover - consistent chords pair up vertices
        raise GraphError(f"LCF vertex count {n} is odd; a cubic graph needs an even count")
    return Graph(n, tuple(sorted(edges)))


def petersen() -> Graph:
    """Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return Graph(10, tuple(outer + inner + spokes))


def heawood() -> Graph:
    return lcf_graph([5, -5], 7)


def pappus() -> Graph:
    return lcf_graph([5, 7, -7, 7, -7, -5], 3)


def moebius_kantor() -> Graph:
    return lcf_graph([5, -5], 8)


def tutte_coxeter() -> Graph:
    return lcf_graph([-13, -9, 7, -7, 9, 13], 5)


def dodecahedral() -> Graph:
    return lcf_graph([10, 7, 4, -4, -7, 10, -4, 7, -7, 4], 2)


def icosahedral() -> Graph:
    """Apex 0, upper ring 1..5, lower ring 6..10, apex 11."""
    edges = []
    for i in range(5):
        up, up_next = 1 + i, 1 + (i + 1) % 5
        lo, lo_next = 6 + i, 6 + (i + 1) % 5
        edges += [(0, up), (up, up_next), (up, lo), (up, lo_next), (lo, lo_next), (lo, 11)]
    return Graph(12, tuple(edges))


_FAMILIES = {
    "complete": (complete, 1),
    "discrete": (discrete, 1),
    "cycle": (cycle, 1),
    "path": (path, 1),
    "star": (star, 1),
    "petersen": (petersen, 0),
    "heawood": (heawood, 0),
    "pappus": (pappus, 0),
    "moebius_kantor": (moebius_kantor, 0),
    "tutte_coxeter": (tutte_coxeter, 0),
    "icosahedral": (icosahedral, 0),
    "dodecahedral": (dodecahedral, 0),
}

FAMILY_ALIASES = {
    "k": "complete",
    "e": "discrete",
    "empty": "discrete",
    "c": "cycle",
    "p": "path",
    "s": "star",
    "mobius_kantor": "moebius_kantor",
    "mobiuskantor": "moebius_kantor",
    "moebiuskantor": "moebius_kantor",
    "tuttecoxeter": "tutte_coxeter",
    "tutte_8_cage": "tutte_coxeter",
    "icosahedron": "icosahedral",
    "dodecahedron": "dodecahedral",
}


def canonical_family(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    key = FAMILY_ALIASES.get(key, key)
    if key not in _FAMILIES:
        raise GraphError(f"unknown graph family {name!r}")
    return key


def family_arity(name: str) -> int:
    return _FAMILIES[canonical_family(name)][1]


def build_named(family: str, *params: int) -> Graph:
    """Build a graph from a family name (aliases accepted) and integer parameters."""
    key = canonical_family(family)
    builder, arity = _FAMILIES[key]
    if len(params) != arity:
        raise GraphError(f"family {key!r} takes {arity} parameter(s), got {len(params)}")
    if key in ("complete", "discrete", "path") and params[0] < 1:
        raise GraphError(f"family {key!r} needs n >= 1")
    return builder(*params)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise GraphError(message)


# ---------------------------------------------------------------------------
# combinators
# ---------------------------------------------------------------------------

def disjoint_union(g: Graph, h: Graph) -> Graph:
    """Vertices of ``h`` are shifted by ``g.n``."""
    shift = g.n
    return Graph(g.n + h.n, g.edges + tuple((u + shift, v + shift) for u, v in h.edges))


def box_product(g: Graph, h: Graph) -> Graph:
    """Cartesian product; vertex ``(x, y)`` has index ``x * h.n + y``."""
    m = h.n
    edges = []
    for x in range(g.n):
        for u, v in h.edges:
            edges.append((x * m + u, x * m + v))
    for u, v in g.edges:
        for y in range(m):
            edges.append((u * m + y, v * m + y))
    return Graph(g.n * m, tuple(edges))


def join(g: Graph, h: Graph) -> Graph:
    """Disjoint union plus every edge between the two parts."""
    base = disjoint_union(g, h)
    extra = tuple((x, g.n + y) for x in range(g.n) for y in range(h.n))
    return Graph(base.n, base.edges + extra)


def wedge(g: Graph, g0: int, h: Graph, h0: int) -> Graph:
    """Identify ``g0`` with ``h0``.

    Vertices of ``g`` keep their indices; the remaining vertices of ``h`` follow
    in increasing order.
    """
    if not 0 <= g0 < g.n:
        raise GraphError(f"base vertex {g0} out of range for a graph on {g.n} vertices")
    if not 0 <= h0 < h.n:
        raise GraphError(f"base vertex {h0} out of range for a graph on {h.n} vertices")
    relabel = {}
    nxt = g.n
    for y in range(h.n):
        if y == h0:
            relabel[y] = g0
        else:
            relabel[y] = nxt
            nxt += 1
    edges = g.edges + tuple((relabel[u], relabel[v]) for u, v in h.edges)
    return Graph(g.n + h.n - 1, edges)


def induced_subgraph(x: Graph, subset: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph on ``subset``.

    Returns the subgraph and the translation table: entry ``i`` is the ambient
    vertex that became vertex ``i``.
    """
    verts = tuple(sorted(set(subset)))
    for v in verts:
        if not 0 <= v < x.n:
            raise GraphError(f"vertex {v} not in graph")
    index = {v: i for i, v in enumerate(verts)}
    edges = tuple((index[u], index[v]) for u, v in x.edges if u in index and v in index)
    return Graph(len(verts), edges), verts


# ---------------------------------------------------------------------------
# convexity and projection
# ---------------------------------------------------------------------------

def is_convex(x: Graph, subset: Iterable[int]) -> bool:
    sub, verts = induced_subgraph(x, subset)
    dx, ds = x.distances, sub.distances
    return all(
        ds[i, j] == dx[u, v] for i, u in enumerate(verts) for j, v in enumerate(verts)
    )


def projection(x: Graph, subset: Iterable[int]) -> dict[int, int] | None:
    """Nearest-point map onto a convex subset, or ``None`` if ``x`` does not project.

    The map is defined on every vertex in a component meeting ``subset``.  A
    vertex projects when it has a unique nearest point ``p`` in ``subset`` and
    ``d(v, u) = d(v, p) + d(p, u)`` for all ``u`` in ``subset``.
    """
    verts = sorted(set(subset))
    if not is_convex(x, verts):
        raise GraphError("projection needs a convex subset")
    d = x.distances
    pi = {}
    for v in range(x.n):
        best = min((d[v, u] for u in verts), default=INF)
        if best is INF:
            continue
        nearest = [u for u in verts if d[v, u] == best]
        if len(nearest) != 1:
            return None
        p = nearest[0]
        if any(d[v, u] != d[v, p] + d[p, u] for u in verts):
            return None
        pi[v] = p
    return pi


@dataclass(frozen=True)
class Decomposition:
    """A cover ``V(X) = gset | hset`` with the induced pieces."""

    ambient: Graph
    gset: frozenset
    hset: frozenset
    g: Graph
    h: Graph
    meet: Graph
    meet_vertices: tuple[int, ...]
    projection: dict | None = field(default=None, compare=False)

    @property
    def intersection(self) -> frozenset:
        return self.gset & self.hset


class CoverError(GraphError):
    """The two vertex sets do not cover the graph, or an edge lies in neither."""


def decompose(x: Graph, gset: Iterable[int], hset: Iterable[int]) -> Decomposition:
    gset, hset = frozenset(gset), frozenset(hset)
    if gset | hset != frozenset(range(x.n)):
        raise CoverError("vertex sets do not cover the graph")
    for u, v in x.edges:
        if not ({u, v} <= gset or {u, v} <= hset):
            raise CoverError(f"edge ({u}, {v}) lies in neither piece")
    g, _ = induced_subgraph(x, gset)
    h, _ = induced_subgraph(x, hset)
    meet, meet_vertices = induced_subgraph(x, gset & hset)
    return Decomposition(x, gset, hset, g, h, meet, meet_vertices)


def is_projecting_decomposition(
    x: Graph, gset: Iterable[int], hset: Iterable[int]
) -> tuple[bool, Decomposition, str | None]:
    """Check the hypotheses of the split Mayer-Vietoris sequence.

    Returns ``(ok, decomposition, reason)``; ``reason`` names the failed
    hypothesis.  A cover violation raises :class:`CoverError` instead.
    """
    dec = decompose(x, gset, hset)
    meet = sorted(dec.intersection)
    if not is_convex(x, meet):
        return False, dec, "intersection is not convex in the ambient graph"
    h_graph, h_verts = induced_subgraph(x, dec.hset)
    local = {v: i for i, v in enumerate(h_verts)}
    pi = projection(h_graph, [local[v] for v in meet])
    if pi is None:
        return False, dec, "second piece does not project onto the intersection"
    pi = {h_verts[a]: h_verts[b] for a, b in pi.items()}
    dec = Decomposition(dec.ambient, dec.gset, dec.hset, dec.g, dec.h, dec.meet,
                        dec.meet_vertices, pi)
    return True, dec, None


# ---------------------------------------------------------------------------
# graph maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraphMap:
    source: Graph
    target: Graph
    vmap: tuple[int, ...]

    def __call__(self, v: int) -> int:
        return self.vmap[v]

    def compose(self, first: "GraphMap") -> "GraphMap":
        """``self`` after ``first``."""
        if first.target != self.source:
            raise GraphError("maps are not composable")
        return GraphMap(first.source, self.target, tuple(self.vmap[v] for v in first.vmap))


def validate_graph_map(g: Graph, h: Graph, vmap: Sequence[int]) -> GraphMap:
    vmap = tuple(int(v) for v in vmap)
    if len(vmap) != g.n:
        raise GraphError(f"vertex map has length {len(vmap)}, expected {g.n}")
    for v in vmap:
        if not 0 <= v < h.n:
            raise GraphError(f"vertex map entry {v} outside target")
    for u, v in g.edges:
        a, b = vmap[u], vmap[v]
        if a != b and not h.has_edge(a, b):
            raise GraphError(f"edge ({u}, {v}) is sent to the non-edge ({a}, {b})")
    return GraphMap(g, h, vmap)
