"""Magnitude homology tables and the magnitude power series.

The magnitude is computed three ways: from chain counts, by inverting the
similarity matrix as a power series, and as the graded Euler characteristic
of the homology table.  They must agree.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .chains import block_boundary, chain_rank_table, trails_by_endpoints
from .graph import Graph, induced_subgraph
from .linalg import (
    SnfResult,
    combine_snf,
    random_prime,
    rank_exact,
    rank_modular,
    rank_two_primes,
    smith_normal_form,
)

log = logging.getLogger(__name__)

METHODS = ("auto", "exact", "modular")
DEFAULT_MAX_TRAILS = 10**7
SNF_DEFAULT_LIMIT = 5000
SNF_HARD_LIMIT = 20000


class ResourceGuardError(RuntimeError):
    """A computation would exceed a configured resource guard."""


class IncompleteTableError(ValueError):
    pass


# ---------------------------------------------------------------------------
# power series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerSeries:
    """Integer power series in q truncated after degree ``lmax``."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))

    @property
    def lmax(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, i):
        return self.coefficients[i]

    def __len__(self):
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def truncate(self, lmax: int) -> "PowerSeries":
        return PowerSeries(self.coefficients[: lmax + 1])

    def _align(self, other):
        m = min(self.lmax, other.lmax)
        return self.coefficients[: m + 1], other.coefficients[: m + 1]

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        a, b = self._align(other)
        return PowerSeries(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        a, b = self._align(other)
        return PowerSeries(tuple(x - y for x, y in zip(a, b)))

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        a, b = self._align(other)
        m = len(a)
        return PowerSeries(tuple(sum(a[i] * b[t - i] for i in range(t + 1)) for t in range(m)))

    def __neg__(self):
        return PowerSeries(tuple(-c for c in self.coefficients))

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coefficients):
            if not c:
                continue
            mag = abs(c)
            body = str(mag) if i == 0 else ("" if mag == 1 else str(mag)) + ("q" if i == 1 else f"q^{i}")
            if not terms:
                terms.append(("-" if c < 0 else "") + body)
            else:
                terms.append(("- " if c < 0 else "+ ") + body)
        return (" ".join(terms) or "0") + f" + O(q^{self.lmax + 1})"


def series_equal(a: PowerSeries, b: PowerSeries) -> bool:
    x, y = a._align(b)
    return x == y


def magnitude_by_counting(g: Graph, lmax: int) -> PowerSeries:
    """Alternating sums of chain-group ranks."""
    table = chain_rank_table(g, lmax)
    coeffs = [0] * (lmax + 1)
    for (k, l), c in table.items():
        coeffs[l] += (-1) ** k * c
    return PowerSeries(coeffs)


def magnitude_by_inverse_series(g: Graph, lmax: int) -> PowerSeries:
    """Sum of the entries of Z^{-1}, Z the similarity matrix with entries q^d(x,y).

    Each component is inverted separately through the geometric series
    ``Z^{-1} = sum_m (-1)^m (Z - I)^m``; only the row sums are tracked, by
    repeatedly applying ``Z - I`` to the all-ones vector.
    """
    total = [0] * (lmax + 1)
    for comp in g.components:
        sub, _ = induced_subgraph(g, comp)
        d = sub.distances
        n = sub.n
        # off-diagonal entries of Z - I as (column, degree) per row
        rows = [[(y, d[x, y]) for y in range(n) if y != x and d[x, y] <= lmax] for x in range(n)]
        vec = [[1] + [0] * lmax for _ in range(n)]  # polynomial vector, degree <= lmax
        sign = 1
        for m in range(lmax + 1):
            for x in range(n):
                for t, c in enumerate(vec[x]):
                    total[t] += sign * c
            if m == lmax:
                break
            nxt = [[0] * (lmax + 1) for _ in range(n)]
            for x in range(n):
                acc = nxt[x]
                for y, deg in rows[x]:
                    src = vec[y]
                    for t in range(lmax + 1 - deg):
                        if src[t]:
                            acc[t + deg] += src[t]
            vec = nxt
            sign = -sign
    return PowerSeries(total)


# ---------------------------------------------------------------------------
# homology tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    rank: int | None
    torsion: tuple[int, ...] | None  # None: not computed
    method: str


@dataclass(frozen=True)
class BigradedGroup:
    """Ranks and torsion of MH_{k,l} for ``k <= l <= lmax``.

    Missing cells are zero.  A cell with ``rank is None`` was not computed.
    """

    lmax: int
    cells: Mapping[tuple[int, int], Cell] = field(default_factory=dict)

    def cell(self, k: int, l: int) -> Cell:
        if l > self.lmax:
            raise KeyError(f"l={l} beyond lmax={self.lmax}")
        return self.cells.get((k, l), Cell(0, (), "trivial"))

    def rank(self, k: int, l: int) -> int | None:
        return self.cell(k, l).rank

    def torsion(self, k: int, l: int) -> tuple[int, ...] | None:
        return self.cell(k, l).torsion

    def is_complete(self) -> bool:
        return all(c.rank is not None for c in self.cells.values())

    def torsion_complete(self) -> bool:
        return all(c.torsion is not None for c in self.cells.values())

    def ranks(self) -> dict[tuple[int, int], int]:
        """Nonzero ranks only."""
        return {kl: c.rank for kl, c in self.cells.items() if c.rank}

    def torsion_cells(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return {kl: c.torsion for kl, c in self.cells.items() if c.torsion}

    def truncate(self, lmax: int) -> "BigradedGroup":
        return BigradedGroup(lmax, {kl: c for kl, c in self.cells.items() if kl[1] <= lmax})


def _level_snf(matrices, snf_limit):
    """SNF of a block-diagonal differential, or None if a block is too large."""
    parts = []
    for m in matrices:
        if min(m.rows, m.cols) > snf_limit:
            return None
        parts.append(smith_normal_form(m))
    return combine_snf(parts)


def _level_rank(matrices, method, rng):
    total, tag = 0, "exact"
    for m in matrices:
        if m.is_zero():
            continue
        if method == "exact":
            r = rank_exact(m)
        elif method == "modular":
            r = rank_modular(m, random_prime(rng))
            tag = "modular"
        else:
            r, t = rank_two_primes(m, rng)
            if t == "modular":
                tag = "modular"
        total += r
    return total, tag


def homology_level(g: Graph, l: int, torsion: bool = True, method: str = "auto",
                   snf_limit: int = SNF_DEFAULT_LIMIT, seed: int = 0) -> dict[int, Cell]:
    """All cells MH_{*,l}(G) for one ``l``; zero cells omitted."""
    if method not in METHODS:
        raise ValueError(f"unknown rank method {method!r}")
    rng = random.Random((seed, l, g.structural_hash).__repr__())
    blocks = trails_by_endpoints(g, l)
    ks = sorted({k for b in blocks.values() for k in b})
    if not ks:
        return {}
    dims = {k: sum(len(b.get(k, ())) for b in blocks.values()) for k in ks}
    ranks: dict[int, int] = {}
    tors: dict[int, tuple[int, ...] | None] = {}
    tags: dict[int, str] = {}
    for k in ks:
        if k == 0 or (k - 1) not in dims:
            ranks[k] = 0
            tors[k] = ()
            tags[k] = "exact"
            continue
        mats = [block_boundary(g, b[k], b[k - 1]) for b in blocks.values() if k in b and (k - 1) in b]
        mats = [m for m in mats if not m.is_zero()]
        snf: SnfResult | None = _level_snf(mats, snf_limit) if torsion else None
        if snf is not None:
            ranks[k], tors[k], tags[k] = snf.rank, snf.torsion, "exact"
        else:
            ranks[k], tags[k] = _level_rank(mats, method, rng)
            tors[k] = None
    cells = {}
    for k in ks:
        r = dims[k] - ranks[k] - ranks.get(k + 1, 0)
        if r < 0:
            raise AssertionError(f"negative rank {r} at (k={k}, l={l})")
        tor = tors.get(k + 1, ()) if torsion else None
        tag = tags[k] if tags.get(k + 1, "exact") == "exact" else tags[k + 1]
        if tags[k] == "modular":
            tag = "modular"
        if r or tor:
            cells[k] = Cell(r, tor, tag)
        elif tor is None:
            cells[k] = Cell(0, None, tag)
    return cells


def _level_task(args):
    g, l, torsion, method, snf_limit, seed = args
    return l, homology_level(g, l, torsion, method, snf_limit, seed)


def compute_homology(g: Graph, lmax: int, *, torsion: bool = True, method: str = "auto",
                     max_trails: int = DEFAULT_MAX_TRAILS, snf_limit: int = SNF_DEFAULT_LIMIT,
                     allow_large_snf: bool = False, jobs: int = 1, seed: int = 0) -> BigradedGroup:
    """Magnitude homology of ``g`` for all ``k <= l <= lmax``.

    With ``torsion`` on, each differential is put in Smith normal form (per
    endpoint block) and ranks are exact.  Blocks whose smaller side exceeds
    ``snf_limit`` fall back to rank-only computation with ``method``; raising
    ``snf_limit`` above 5000 needs ``allow_large_snf`` and is capped at 20000.

    Levels ``l`` whose cumulative number of generators would exceed
    ``max_trails`` are reported as not computed rather than dropped.
    """
    if lmax < 0:
        raise ValueError("lmax must be nonnegative")
    if snf_limit > SNF_DEFAULT_LIMIT and not allow_large_snf:
        raise ResourceGuardError(f"snf_limit above {SNF_DEFAULT_LIMIT} needs allow_large_snf")
    snf_limit = min(snf_limit, SNF_HARD_LIMIT)
    counts = chain_rank_table(g, lmax)
    per_level = [0] * (lmax + 1)
    for (k, l), c in counts.items():
        per_level[l] += c
    levels, running = [], 0
    for l in range(lmax + 1):
        running += per_level[l]
        if running > max_trails:
            break
        levels.append(l)
    tasks = [(g, l, torsion, method, snf_limit, seed) for l in levels]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_level_task, tasks))
    else:
        results = [_level_task(t) for t in tasks]
    cells = {}
    for l, level in results:
        for k, c in level.items():
            cells[(k, l)] = c
    for l in range(len(levels), lmax + 1):
        log.warning("level l=%d skipped: more than %d generators", l, max_trails)
        for k in range(l + 1):
            if counts.get((k, l)):
                cells[(k, l)] = Cell(None, None, "not computed")
    return BigradedGroup(lmax, dict(sorted(cells.items(), key=lambda kv: (kv[0][1], kv[0][0]))))


def magnitude_by_euler(table: BigradedGroup) -> PowerSeries:
    if not table.is_complete():
        raise IncompleteTableError("homology table has cells that were not computed")
    coeffs = [0] * (table.lmax + 1)
    for (k, l), c in table.cells.items():
        coeffs[l] += (-1) ** k * c.rank
    return PowerSeries(coeffs)


def euler_row(table: BigradedGroup, l: int) -> int:
    return sum((-1) ** k * c.rank for (k, ll), c in table.cells.items() if ll == l)


def table_from_ranks(lmax: int, ranks: Mapping[tuple[int, int], int],
                     torsion: Mapping[tuple[int, int], Iterable[int]] | None = None,
                     method: str = "given") -> BigradedGroup:
    """Build a table from explicit data (tests and Künneth arithmetic use this)."""
    torsion = torsion or {}
    keys = set(ranks) | set(torsion)
    cells = {}
    for kl in keys:
        if kl[1] > lmax:
            continue
        r = ranks.get(kl, 0)
        t = tuple(sorted(torsion.get(kl, ())))
        if r or t:
            cells[kl] = Cell(r, t, method)
    return BigradedGroup(lmax, dict(sorted(cells.items(), key=lambda kv: (kv[0][1], kv[0][0]))))
