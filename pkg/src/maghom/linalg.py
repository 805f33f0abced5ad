"""Exact sparse integer matrices: products, ranks and Smith normal form.

Storage is column-major: a matrix is a tuple of columns, each a ``{row: value}``
dict with no zero values.  Elimination always runs on private copies.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

# two-prime modular rank draws from this interval
PRIME_LOW, PRIME_HIGH = 2**30, 2**31


class SparseIntMatrix:
    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows: int, cols: int, columns: Sequence[Mapping[int, int]] | None = None):
        self.rows = rows
        self.cols = cols
        if columns is None:
            columns = [{} for _ in range(cols)]
        if len(columns) != cols:
            raise ValueError("column count mismatch")
        cleaned = []
        for col in columns:
            c = {}
            for r, v in col.items():
                if not 0 <= r < rows:
                    raise ValueError(f"row index {r} out of range")
                if v:
                    c[r] = int(v)
            cleaned.append(c)
        self.columns = tuple(cleaned)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "SparseIntMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        columns = [{} for _ in range(cols)]
        for i, row in enumerate(data):
            for j, v in enumerate(row):
                if v:
                    columns[j][i] = v
        return cls(rows, cols, columns)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int, int]]) -> "SparseIntMatrix":
        columns = [{} for _ in range(cols)]
        for r, c, v in entries:
            columns[c][r] = columns[c].get(r, 0) + v
        return cls(rows, cols, columns)

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseIntMatrix":
        return cls(rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def entries(self):
        for j, col in enumerate(self.columns):
            for i, v in sorted(col.items()):
                yield i, j, v

    def __getitem__(self, idx) -> int:
        i, j = idx
        return self.columns[j].get(i, 0)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, j, v in self.entries():
            out[i][j] = v
        return out

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix.from_entries(self.cols, self.rows, ((j, i, v) for i, j, v in self.entries()))

    def is_zero(self) -> bool:
        return not any(self.columns)

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "SparseIntMatrix":
        """Row ``i`` moves to ``row_perm[i]``, column ``j`` to ``col_perm[j]``."""
        columns = [None] * self.cols
        for j, col in enumerate(self.columns):
            columns[col_perm[j]] = {row_perm[i]: v for i, v in col.items()}
        return SparseIntMatrix(self.rows, self.cols, columns)

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        return multiply(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, SparseIntMatrix)
            and self.shape == other.shape
            and self.columns == other.columns
        )

    def __hash__(self):
        return hash((self.shape, tuple(tuple(sorted(c.items())) for c in self.columns)))

    def __repr__(self):
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


def multiply(a: SparseIntMatrix, b: SparseIntMatrix) -> SparseIntMatrix:
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    out = []
    for bcol in b.columns:
        acc: dict[int, int] = {}
        for k, bv in bcol.items():
            for i, av in a.columns[k].items():
                acc[i] = acc.get(i, 0) + av * bv
        out.append({i: v for i, v in acc.items() if v})
    return SparseIntMatrix(a.rows, b.cols, out)


# ---------------------------------------------------------------------------
# sparse elimination
# ---------------------------------------------------------------------------

def _eliminate(matrix: SparseIntMatrix, modulus: int | None):
    """Markowitz-ordered sparse elimination.

    With a prime ``modulus`` every nonzero is a pivot and the returned residual
    is empty.  With ``modulus=None`` the arithmetic is over the integers and only
    entries ``+-1`` are used as pivots; each such pivot contributes an
    invariant factor 1, and the residual columns (as ``{row: value}`` dicts)
    carry the rest of the Smith form.

    Returns ``(pivot_count, residual_columns)``.
    """
    p = modulus
    cols: dict[int, dict[int, int]] = {}
    rows: dict[int, set[int]] = {}
    for j, col in enumerate(matrix.columns):
        if p is None:
            c = dict(col)
        else:
            c = {i: v % p for i, v in col.items() if v % p}
        if c:
            cols[j] = c
            for i in c:
                rows.setdefault(i, set()).add(j)

    heap = [(len(c), j) for j, c in cols.items()]
    heapq.heapify(heap)
    deferred: set[int] = set()
    rank = 0

    while True:
        while heap:
            size, j = heapq.heappop(heap)
            col = cols.get(j)
            if col is None or len(col) != size:
                continue
            if p is None:
                candidates = [i for i, v in col.items() if v == 1 or v == -1]
                if not candidates:
                    deferred.add(j)
                    continue
            else:
                candidates = col
            r = min(candidates, key=lambda i: (len(rows[i]), i))
            pv = col[r]
            inv = pv if p is None else pow(pv, -1, p)
            del cols[j]
            for i in col:
                rows[i].discard(j)
            others = rows.pop(r)
            for i in col:
                if i != r and not rows.get(i):
                    rows.pop(i, None)
            for jj in others:
                target = cols[jj]
                f = target.pop(r) * inv
                if p is not None:
                    f %= p
                for i, v in col.items():
                    if i == r:
                        continue
                    nv = target.get(i, 0) - f * v
                    if p is not None:
                        nv %= p
                    if nv:
                        if i not in target:
                            rows.setdefault(i, set()).add(jj)
                        target[i] = nv
                    elif i in target:
                        del target[i]
                        rows[i].discard(jj)
                        if not rows[i]:
                            del rows[i]
                if not target:
                    del cols[jj]
                    deferred.discard(jj)
                else:
                    deferred.discard(jj)
                    heapq.heappush(heap, (len(target), jj))
            rank += 1
        # deferred columns that gained a unit entry get another chance
        retry = [j for j in deferred if j in cols and any(v in (1, -1) for v in cols[j].values())]
        if not retry:
            break
        for j in retry:
            deferred.discard(j)
            heapq.heappush(heap, (len(cols[j]), j))
    return rank, [cols[j] for j in sorted(cols)]


def _residual_dense(residual: list[dict[int, int]]) -> list[list[int]]:
    if not residual:
        return []
    row_ids = sorted({i for c in residual for i in c})
    index = {r: k for k, r in enumerate(row_ids)}
    dense = [[0] * len(residual) for _ in row_ids]
    for j, c in enumerate(residual):
        for i, v in c.items():
            dense[index[i]][j] = v
    return dense


def rank_modular(matrix: SparseIntMatrix, p: int) -> int:
    """Rank over GF(p).  Never exceeds the rational rank."""
    rank, residual = _eliminate(matrix, p)
    assert not residual
    return rank


def bareiss_rank(dense: Sequence[Sequence[int]]) -> int:
    """Rank of a dense integer matrix by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in dense]
    if not a or not a[0]:
        return 0
    m, n = len(a), len(a[0])
    prev = 1
    rank = 0
    col = 0
    while rank < m and col < n:
        piv = next((i for i in range(rank, m) if a[i][col]), None)
        if piv is None:
            col += 1
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pv = a[rank][col]
        for i in range(rank + 1, m):
            ai = a[i]
            f = ai[col]
            pr = a[rank]
            for j in range(col + 1, n):
                ai[j] = (pv * ai[j] - f * pr[j]) // prev
            ai[col] = 0
        prev = pv
        rank += 1
        col += 1
    return rank


def rank_exact(matrix: SparseIntMatrix) -> int:
    """Rank over the rationals.

    Unit pivots are eliminated sparsely over the integers; whatever is left is
    handed to dense Bareiss elimination.
    """
    units, residual = _eliminate(matrix, None)
    return units + bareiss_rank(_residual_dense(residual))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SnfResult:
    rank: int
    invariant_factors: tuple[int, ...]

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


def _dense_snf_diagonal(a: list[list[int]]) -> list[int]:
    """Nonzero diagonal of a diagonalisation (not yet divisibility-normalised)."""
    a = [list(r) for r in a]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        # smallest-magnitude nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            pv = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // pv
                    ai, at = a[i], a[t]
                    for j in range(t, n):
                        ai[j] -= q * at[j]
                    if ai[t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // pv
                    for i in range(t, m):
                        a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        done = False
            if done:
                break
            # move a smaller remainder into the pivot position and repeat
            best = None
            for i in range(t, m):
                v = a[i][t]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, t)
            for j in range(t, n):
                v = a[t][j]
                if v and abs(v) < best[0]:
                    best = (abs(v), t, j)
            _, i, j = best
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def normalise_factors(values: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors ``d_1 | d_2 | ...`` of the direct sum of ``Z/v``.

    Zeros are ignored; ones are kept so the result length equals the number of
    nonzero inputs.
    """
    vals = [abs(v) for v in values if v]
    prime_powers: dict[int, list[int]] = {}
    for v in vals:
        if v == 1:
            continue
        for prime, e in _factorise(v).items():
            prime_powers.setdefault(prime, []).append(prime**e)
    width = max((len(x) for x in prime_powers.values()), default=0)
    factors = [1] * width
    for powers in prime_powers.values():
        powers.sort()
        for k, q in enumerate(powers):
            factors[width - len(powers) + k] *= q
    total = len(vals)
    return tuple([1] * (total - width) + factors) if total >= width else tuple(factors)


def _factorise(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def smith_normal_form(matrix: SparseIntMatrix) -> SnfResult:
    units, residual = _eliminate(matrix, None)
    diag = _dense_snf_diagonal(_residual_dense(residual))
    factors = normalise_factors([1] * units + diag)
    return SnfResult(len(factors), factors)


def combine_snf(parts: Iterable[SnfResult]) -> SnfResult:
    """Smith form of a block-diagonal matrix from the Smith forms of its blocks."""
    factors = normalise_factors(d for part in parts for d in part.invariant_factors)
    return SnfResult(len(factors), factors)


# ---------------------------------------------------------------------------
# primes
# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng: random.Random, low: int = PRIME_LOW, high: int = PRIME_HIGH) -> int:
    while True:
        c = rng.randrange(low | 1, high, 2)
        if is_prime(c):
            return c


def rank_two_primes(matrix: SparseIntMatrix, rng: random.Random) -> tuple[int, str]:
    """Rank by elimination modulo two random primes, escalating to exact on disagreement.

    Returns the rank and the method tag that produced it.
    """
    p = random_prime(rng)
    q = random_prime(rng)
    while q == p:
        q = random_prime(rng)
    r1 = rank_modular(matrix, p)
    r2 = rank_modular(matrix, q)
    if r1 == r2:
        return r1, "modular"
    return rank_exact(matrix), "exact"
