"""Exact integer linear algebra on lists of Python ints.

Matrices are lists of rows.  Lattices are row spans: a generator matrix
``G`` with ``c`` columns spans ``{x G : x integral}`` inside ``Z^c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    bt = list(zip(*b)) if b else []
    if not bt:
        return [[] for _ in a]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def vecmat(v: Sequence[int], m: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    if ncols is None:
        ncols = len(m[0]) if m else 0
    out = [0] * ncols
    for a, row in zip(v, m):
        if a:
            for j, x in enumerate(row):
                out[j] += a * x
    return out


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class FinAbGroup:
    """``Z^free_rank`` plus cyclic factors ``d_1 | d_2 | ...`` (all > 1)."""

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        f = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        if any(x <= 1 for x in f) or any(b % a for a, b in zip(f, f[1:])):
            raise ValueError(f"not a canonical divisibility chain: {f}")

    @classmethod
    def from_cyclic(cls, orders: Sequence[int], free_rank: int = 0) -> "FinAbGroup":
        """Canonical form of ``Z^free_rank + sum Z/orders[k]`` (an order of 0 adds a free summand)."""
        free_rank += sum(1 for x in orders if x == 0)
        nz = [abs(int(x)) for x in orders if x != 0]
        if not nz:
            return cls(free_rank, ())
        diag = smith_normal_form([[x if i == j else 0 for j in range(len(nz))]
                                  for i, x in enumerate(nz)]).diag
        return cls(free_rank, tuple(x for x in diag if x > 1))

    @property
    def order(self) -> int:
        """Order of the torsion subgroup."""
        return math.prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def torsion(self) -> "FinAbGroup":
        return FinAbGroup(0, self.invariant_factors)

    def __add__(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup.from_cyclic(self.invariant_factors + other.invariant_factors,
                                      self.free_rank + other.free_rank)

    def multiple(self, k: int) -> "FinAbGroup":
        """The image of multiplication by ``k``."""
        return FinAbGroup.from_cyclic([d // math.gcd(d, k) for d in self.invariant_factors],
                                      self.free_rank)

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


@dataclass
class SNF:
    """``left @ m @ right == D`` where ``D`` carries ``diag`` on its diagonal."""

    diag: list[int]
    left: Matrix
    right: Matrix
    shape: tuple[int, int] = field(default=(0, 0))

    @property
    def rank(self) -> int:
        return len(self.diag)

    def diagonal_matrix(self) -> Matrix:
        r, c = self.shape
        return [[self.diag[i] if i == j and i < len(self.diag) else 0 for j in range(c)]
                for i in range(r)]


def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None) -> SNF:
    rows = len(m)
    cols = len(m[0]) if rows else (ncols or 0)
    a = [list(map(int, r)) for r in m]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, f):
        # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, f):
        for r in a:
            r[dst] += f * r[src]
        for r in v:
            r[dst] += f * r[src]

    diag = []
    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t to the pivot
                cands = [(abs(a[i][t]), i, "r") for i in range(t + 1, rows) if a[i][t]]
                cands += [(abs(a[t][j]), j, "c") for j in range(t + 1, cols) if a[t][j]]
                _, k, kind = min(cands)
                if kind == "r":
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        diag.append(a[t][t])
        t += 1
    return SNF(diag, u, v, (rows, cols))


def hermite_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, Matrix]:
    """Row-style HNF.  Returns ``(H, U)`` with ``U @ m == H``; ``H`` keeps only the
    nonzero rows, pivots are positive and strictly increase in column, and entries
    above a pivot are reduced into ``[0, pivot)``.  ``U`` has one row per row of ``H``."""
    rows = len(m)
    cols = len(m[0]) if rows else (ncols or 0)
    a = [list(map(int, r)) for r in m]
    u = identity(rows)
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if a[i][c]]
            if not nz:
                break
            k = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[k] = a[k], a[r]
            u[r], u[k] = u[k], u[r]
            done = True
            for i in range(r + 1, rows):
                if a[i][c]:
                    f = a[i][c] // a[r][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - f * y for x, y in zip(u[i], u[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if not any(a[i][c] for i in range(r, rows)):
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        p = a[r][c]
        for i in range(r):
            f = a[i][c] // p
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                u[i] = [x - f * y for x, y in zip(u[i], u[r])]
        pivots.append(c)
        r += 1
    return a[:r], u[:r]


def _pivot_cols(h: Matrix) -> list[int]:
    return [next(j for j, x in enumerate(row) if x) for row in h]


def inverse_unimodular(m: Sequence[Sequence[int]]) -> Matrix:
    n = len(m)
    aug = [list(map(int, r)) + [int(i == j) for j in range(n)] for i, r in enumerate(m)]
    h, _ = hermite_normal_form(aug)
    if len(h) != n or any(h[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    return [row[n:] for row in h]


def quotient_group(ambient_rank: int, generators: Sequence[Sequence[int]]) -> FinAbGroup:
    """``Z^ambient_rank`` modulo the row span of ``generators``."""
    gens = [list(g) for g in generators if any(g)]
    for g in gens:
        if len(g) != ambient_rank:
            raise ValueError("generator length does not match ambient rank")
    if not gens:
        return FinAbGroup(ambient_rank, ())
    diag = smith_normal_form(gens).diag
    return FinAbGroup(ambient_rank - len(diag), tuple(x for x in diag if x > 1))


def lattice_member(generators: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[bool, list[int] | None]:
    """Decide ``v`` in the row span; on success also return coefficients ``x``
    with ``x @ generators == v``."""
    gens = [list(map(int, g)) for g in generators]
    v = [int(x) for x in v]
    if not gens:
        return (not any(v)), ([] if not any(v) else None)
    h, u = hermite_normal_form(gens)
    piv = _pivot_cols(h)
    rest = list(v)
    y = [0] * len(h)
    for k, c in enumerate(piv):
        # columns before c are already cleared
        if any(rest[j] for j in range(c)):
            return False, None
        if rest[c] % h[k][c]:
            return False, None
        y[k] = rest[c] // h[k][c]
        if y[k]:
            rest = [a - y[k] * b for a, b in zip(rest, h[k])]
    if any(rest):
        return False, None
    x = vecmat(y, u, len(gens))
    assert vecmat(x, gens, len(v)) == v
    return True, x


def sublattice_with_zero_prefix(generators: Sequence[Sequence[int]], prefix_len: int,
                                ncols: int | None = None) -> Matrix:
    """Generators of ``{w in span : w[:prefix_len] == 0}``, projected to the remaining
    coordinates."""
    cols = len(generators[0]) if generators else (ncols or 0)
    if prefix_len > cols:
        raise ValueError("prefix longer than the vectors")
    h, _ = hermite_normal_form(generators, cols)
    # in echelon form the rows with a pivot past the prefix span the sub-lattice
    return [row[prefix_len:] for row, c in zip(h, _pivot_cols(h)) if c >= prefix_len]


def element_order(generators: Sequence[Sequence[int]], v: Sequence[int]) -> int:
    """Order of the class of ``v`` in ``Z^c / span``; 0 if it has infinite order."""
    c = len(v)
    gens = [list(g) for g in generators if any(g)]
    if not gens:
        return 1 if not any(v) else 0
    snf = smith_normal_form(gens)
    y = vecmat(v, snf.right, c)
    order = 1
    for k, yk in enumerate(y):
        if k < snf.rank:
            dk = snf.diag[k]
            order = math.lcm(order, dk // math.gcd(dk, yk))
        elif yk:
            return 0
    return order
