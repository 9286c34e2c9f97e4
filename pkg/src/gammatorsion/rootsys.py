"""Root data for the simple types, weight arithmetic and Weyl orbits.

Weights are plain integer tuples in the fundamental-weight basis.  The
Cartan matrix follows ``cartan[i][j] = <alpha_j, alpha_i^vee>``, so the
simple root ``alpha_j`` is column ``j`` of the Cartan matrix and pairing a
weight with the simple coroot ``alpha_i^vee`` is just coordinate ``i``.
Indices are 0-based in code; Bourbaki's node ``k`` is index ``k - 1``.
"""

from __future__ import annotations

import functools
import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import intlat
from .intlat import FinAbGroup
from .symtrunc import TruncatedPolynomial

Weight = tuple[int, ...]

DEFAULT_ORBIT_CEILING = 2_000_000

_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3}


class InvalidTypeError(ValueError):
    pass


class OrbitCeilingError(RuntimeError):
    def __init__(self, ceiling: int):
        super().__init__(f"Weyl orbit exceeds the ceiling of {ceiling} weights")
        self.ceiling = ceiling


@dataclass(frozen=True)
class RootDatum:
    family: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    coroot_norm: tuple[int, ...]

    @property
    def name(self) -> str:
        if "x" in self.family:
            return self.family
        return f"{self.family}{self.rank}"

    def __repr__(self) -> str:
        return f"RootDatum({self.name})"

    def simple_root(self, j: int) -> Weight:
        return tuple(self.cartan[i][j] for i in range(self.rank))

    def fundamental_weight(self, i: int) -> Weight:
        return tuple(int(k == i) for k in range(self.rank))

    def zero(self) -> Weight:
        return (0,) * self.rank

    @functools.cached_property
    def cartan_array(self) -> np.ndarray:
        a = np.array(self.cartan, dtype=np.int64)
        a.setflags(write=False)
        return a

    def is_simply_laced(self) -> bool:
        return len(set(self.coroot_norm)) == 1

    def check(self) -> None:
        """Raise ``InvalidTypeError`` if the static tables are inconsistent."""
        n, c, qn = self.rank, self.cartan, self.coroot_norm
        if len(c) != n or any(len(row) != n for row in c) or len(qn) != n:
            raise InvalidTypeError(f"{self.name}: table shape mismatch")
        for i in range(n):
            if c[i][i] != 2:
                raise InvalidTypeError(f"{self.name}: diagonal entry {i} is {c[i][i]}")
            for j in range(n):
                if i == j:
                    continue
                if c[i][j] not in (0, -1, -2, -3):
                    raise InvalidTypeError(f"{self.name}: bad entry c({i},{j})")
                if (c[i][j] == 0) != (c[j][i] == 0):
                    raise InvalidTypeError(f"{self.name}: zero pattern not symmetric")
                # polar form of q on simple coroots: b(i, j) = c(i, j) * q(alpha_j^vee)
                if c[i][j] * qn[j] != c[j][i] * qn[i]:
                    raise InvalidTypeError(f"{self.name}: coroot norms do not symmetrize")
        if min(qn) != 1 or not set(qn) <= {1, 2, 3}:
            raise InvalidTypeError(f"{self.name}: coroot norms not normalized")


def _chain_cartan(n: int, edges: dict[tuple[int, int], int]) -> list[list[int]]:
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for (i, j), v in edges.items():
        c[i][j] = v
    return c


def _simple_edges(n: int, pairs: Sequence[tuple[int, int]]) -> dict[tuple[int, int], int]:
    out = {}
    for a, b in pairs:
        out[(a - 1, b - 1)] = -1
        out[(b - 1, a - 1)] = -1
    return out


def build_root_datum(family: str, rank: int) -> RootDatum:
    """Return the datum of the simple type ``family``/``rank`` in Bourbaki numbering."""
    family = family.upper()
    n = rank
    if family in _MIN_RANK:
        if not isinstance(n, int) or n < _MIN_RANK[family]:
            raise InvalidTypeError(
                f"type {family}{n} is invalid: {family}_n needs n >= {_MIN_RANK[family]}")
    elif family == "E":
        if n not in (6, 7, 8):
            raise InvalidTypeError(f"type E{n} is invalid: E_n needs n in 6, 7, 8")
    elif family == "F":
        if n != 4:
            raise InvalidTypeError(f"type F{n} is invalid: only F4 exists")
    elif family == "G":
        if n != 2:
            raise InvalidTypeError(f"type G{n} is invalid: only G2 exists")
    else:
        raise InvalidTypeError(f"unknown family {family!r}")

    chain = [(k, k + 1) for k in range(1, n)]
    qn = [1] * n
    if family == "A":
        edges = _simple_edges(n, chain)
    elif family == "B":
        # alpha_n short
        edges = _simple_edges(n, chain[:-1])
        edges[(n - 2, n - 1)] = -1
        edges[(n - 1, n - 2)] = -2
        qn[n - 1] = 2
    elif family == "C":
        # alpha_n long
        edges = _simple_edges(n, chain[:-1])
        edges[(n - 2, n - 1)] = -2
        edges[(n - 1, n - 2)] = -1
        qn = [2] * (n - 1) + [1]
    elif family == "D":
        edges = _simple_edges(n, chain[:-1] + [(n - 2, n)])
    elif family == "E":
        edges = _simple_edges(n, [(1, 3), (3, 4), (2, 4)] + [(k, k + 1) for k in range(4, n)])
    elif family == "F":
        edges = _simple_edges(n, [(1, 2), (3, 4)])
        edges[(1, 2)] = -1
        edges[(2, 1)] = -2
        qn = [1, 1, 2, 2]
    else:
        # G2: alpha_1 short
        edges = {(0, 1): -3, (1, 0): -1}
        qn = [3, 1]

    c = _chain_cartan(n, edges)
    d = RootDatum(family, n, tuple(tuple(r) for r in c), tuple(qn))
    d.check()
    return d


def product_datum(*factors: RootDatum) -> RootDatum:
    """Block-diagonal datum of a product such as A1 x A1 (not simple; no q)."""
    n = sum(f.rank for f in factors)
    c = [[0] * n for _ in range(n)]
    off = 0
    for f in factors:
        for i in range(f.rank):
            for j in range(f.rank):
                c[off + i][off + j] = f.cartan[i][j]
        off += f.rank
    qn = tuple(x for f in factors for x in f.coroot_norm)
    d = RootDatum("x".join(f.name for f in factors), n, tuple(map(tuple, c)), qn)
    d.check()
    return d


_TYPE_RE = re.compile(r"^\s*([A-Ga-g])\s*(\d+)\s*$")


def parse_type(spec: str) -> RootDatum:
    """Parse a type string such as ``"E7"`` or ``"b3"``."""
    m = _TYPE_RE.match(spec)
    if not m:
        raise InvalidTypeError(f"cannot parse type spec {spec!r} (expected e.g. 'E7')")
    return build_root_datum(m.group(1).upper(), int(m.group(2)))


def pairing(d: RootDatum, lam: Sequence[int], coroot: int | Sequence[int]) -> int:
    """``<lam, alpha^vee>`` for a simple coroot index or a coroot given as
    coefficients on the simple coroots."""
    if isinstance(coroot, (int, np.integer)):
        if not 0 <= coroot < d.rank:
            raise IndexError(f"coroot index {coroot} out of range for {d.name}")
        return int(lam[coroot])
    return sum(int(a) * int(b) for a, b in zip(lam, coroot))


def simple_reflection(d: RootDatum, i: int, lam: Sequence[int]) -> Weight:
    k = lam[i]
    if k == 0:
        return tuple(lam)
    return tuple(x - k * d.cartan[r][i] for r, x in enumerate(lam))


def reflect_word(d: RootDatum, letters: Sequence[int], lam: Sequence[int]) -> Weight:
    """Apply ``s_{l_1}`` first, then ``s_{l_2}``, and so on."""
    out = tuple(lam)
    for i in letters:
        out = simple_reflection(d, i, out)
    return out


def is_dominant(lam: Sequence[int]) -> bool:
    return all(x >= 0 for x in lam)


def dominant_representative(d: RootDatum, lam: Sequence[int]) -> Weight:
    mu = list(lam)
    while True:
        for i, x in enumerate(mu):
            if x < 0:
                mu = list(simple_reflection(d, i, mu))
                break
        else:
            return tuple(mu)


def _sorted_rows(a: np.ndarray) -> np.ndarray:
    if len(a) == 0:
        return a
    return a[np.lexsort(a.T[::-1])]


_ORBITS: dict[tuple[RootDatum, Weight], np.ndarray] = {}
_ORBITS_LOCK = threading.Lock()
# Oldest entries are dropped once the memo holds more rows than this.
MEMO_ROW_LIMIT = 4_000_000


def _memo_store(key, arr: np.ndarray) -> np.ndarray:
    with _ORBITS_LOCK:
        arr = _ORBITS.setdefault(key, arr)
        rows = sum(len(a) for a in _ORBITS.values())
        for k in list(_ORBITS):
            if rows <= MEMO_ROW_LIMIT or k == key:
                break
            rows -= len(_ORBITS.pop(k))
    return arr


def _enumerate_orbit(d: RootDatum, dom: Weight, ceiling: int) -> np.ndarray:
    cart = d.cartan_array
    layer = np.array([dom], dtype=np.int64)
    layers = [layer]
    total = 1
    if total > ceiling:
        raise OrbitCeilingError(ceiling)
    # Walking down from the dominant weight, s_i only where coordinate i > 0:
    # every orbit element is reached and all duplicates sit in one layer.
    while len(layer):
        pieces = []
        for i in range(d.rank):
            sel = layer[layer[:, i] > 0]
            if len(sel):
                pieces.append(sel - np.outer(sel[:, i], cart[:, i]))
        if not pieces:
            break
        layer = np.unique(np.concatenate(pieces), axis=0)
        total += len(layer)
        if total > ceiling:
            raise OrbitCeilingError(ceiling)
        layers.append(layer)
    out = _sorted_rows(np.concatenate(layers))
    out.setflags(write=False)
    return out


def seed_orbit(d: RootDatum, lam: Sequence[int], orbit: np.ndarray) -> None:
    """Install a precomputed orbit (e.g. from a disk cache) in the in-process memo."""
    dom = dominant_representative(d, lam)
    arr = np.array(orbit, dtype=np.int64).reshape(-1, d.rank)
    if not np.all(arr == np.array(dom), axis=1).any():
        raise ValueError("seeded orbit does not contain its dominant weight")
    arr.setflags(write=False)
    with _ORBITS_LOCK:
        _ORBITS.pop((d, dom), None)
    _memo_store((d, dom), arr)


def clear_orbit_memo() -> None:
    with _ORBITS_LOCK:
        _ORBITS.clear()


def orbit_array(d: RootDatum, lam: Sequence[int], ceiling: int = DEFAULT_ORBIT_CEILING) -> np.ndarray:
    """The orbit ``W lam`` as a read-only ``(size, rank)`` array, rows sorted
    lexicographically."""
    if len(lam) != d.rank:
        raise ValueError(f"weight {tuple(lam)} has wrong length for {d.name}")
    dom = dominant_representative(d, lam)
    key = (d, dom)
    arr = _ORBITS.get(key)
    if arr is None:
        arr = _memo_store(key, _enumerate_orbit(d, dom, ceiling))
    elif len(arr) > ceiling:
        raise OrbitCeilingError(ceiling)
    return arr


def weyl_orbit(d: RootDatum, lam: Sequence[int], ceiling: int = DEFAULT_ORBIT_CEILING) -> list[Weight]:
    return [tuple(int(x) for x in row) for row in orbit_array(d, lam, ceiling)]


def weyl_group_order(d: RootDatum) -> int:
    """Order of W from the product of (exponent + 1), via root counts per height."""
    n = d.rank
    heights: dict[int, int] = {}
    for k in positive_root_coefficients(d):
        h = sum(k)
        heights[h] = heights.get(h, 0) + 1
    # Kostant: the partition dual to the height distribution gives the exponents.
    exps = []
    for m in range(1, n + 1):
        exps.append(sum(1 for h, c in heights.items() if c >= m))
    return math.prod(e + 1 for e in exps)


def root_coefficients(d: RootDatum, weight: Sequence[int]) -> tuple[Fraction, ...]:
    """Coordinates of ``weight`` in the simple-root basis (solves the Cartan system exactly)."""
    n = d.rank
    # weight = sum_j k_j alpha_j = cartan @ k
    m = [[Fraction(d.cartan[i][j]) for j in range(n)] + [Fraction(weight[i])] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return tuple(m[i][n] for i in range(n))


def is_negative_root(d: RootDatum, root: Sequence[int]) -> bool:
    k = root_coefficients(d, root)
    return all(x <= 0 for x in k) and any(x < 0 for x in k)


@dataclass(frozen=True)
class Root:
    weight: Weight
    coefficients: tuple[int, ...]
    coroot: tuple[int, ...]
    norm: int  # q(coroot): 1 for long roots

    @property
    def is_long(self) -> bool:
        return self.norm == 1

    @property
    def height(self) -> int:
        return sum(self.coefficients)


@functools.lru_cache(maxsize=64)
def roots(d: RootDatum) -> tuple[Root, ...]:
    """All roots, as the union of the orbits of the simple roots."""
    seen: dict[Weight, Root] = {}
    for j in range(d.rank):
        qj = d.coroot_norm[j]
        for w in weyl_orbit(d, d.simple_root(j)):
            if w in seen:
                continue
            k = root_coefficients(d, w)
            assert all(x.denominator == 1 for x in k)
            kint = tuple(int(x) for x in k)
            # alpha^vee = sum_i k_i * (q_alpha / q_i) alpha_i^vee
            cor = []
            for i in range(d.rank):
                v = Fraction(kint[i] * qj, d.coroot_norm[i])
                assert v.denominator == 1
                cor.append(int(v))
            seen[w] = Root(w, kint, tuple(cor), qj)
    out = tuple(sorted(seen.values(), key=lambda r: r.weight))
    for r in out:
        assert pairing(d, r.weight, r.coroot) == 2
    return out


def positive_root_coefficients(d: RootDatum) -> list[tuple[int, ...]]:
    return [r.coefficients for r in roots(d) if r.height > 0]


def highest_root(d: RootDatum) -> Root:
    return max(roots(d), key=lambda r: (r.height, r.weight))


def long_roots(d: RootDatum) -> list[Root]:
    return [r for r in roots(d) if r.is_long]


def short_roots(d: RootDatum) -> list[Root]:
    return [r for r in roots(d) if not r.is_long]


def polar_form(d: RootDatum) -> list[list[int]]:
    """Gram matrix of the polar form of q on the simple coroots."""
    n = d.rank
    return [[d.cartan[i][j] * d.coroot_norm[j] if i != j else 2 * d.coroot_norm[i]
             for j in range(n)] for i in range(n)]


def invariant_form_q(d: RootDatum) -> TruncatedPolynomial:
    """The W-invariant quadratic form, normalized to 1 on short coroots."""
    n = d.rank
    b = polar_form(d)
    terms = {}
    for i in range(n):
        e = [0] * n
        e[i] = 2
        terms[tuple(e)] = d.coroot_norm[i]
        for j in range(i + 1, n):
            if b[i][j]:
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = b[i][j]
    q = TruncatedPolynomial(n, 2, terms)
    assert math.gcd(*q.terms.values()) == 1
    return q


@dataclass(frozen=True)
class FundGroupInfo:
    invariant_factors: tuple[int, ...]
    images: tuple[tuple[int, ...], ...]

    @property
    def group(self) -> FinAbGroup:
        return FinAbGroup(0, self.invariant_factors)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    def image(self, lam: Sequence[int]) -> tuple[int, ...]:
        """Class of a weight in the chosen decomposition of the quotient."""
        return tuple(sum(a * img[k] for a, img in zip(lam, self.images)) % f
                     for k, f in enumerate(self.invariant_factors))


@functools.lru_cache(maxsize=64)
def fundamental_group(d: RootDatum) -> FundGroupInfo:
    """Weight lattice modulo root lattice, with the image of each fundamental weight."""
    # Quotient of Z^n by the columns of the Cartan matrix.
    rel = [list(col) for col in zip(*d.cartan)]
    snf = intlat.smith_normal_form(rel)
    # U R V = D, so x -> x V carries the relation lattice onto the rows of D.
    v = snf.right
    keep = [k for k, x in enumerate(snf.diag) if x != 1]
    factors = tuple(snf.diag[k] for k in keep)
    imgs = [[v[i][k] % snf.diag[k] for k in keep] for i in range(d.rank)]
    # Normalize cyclic groups: the first fundamental weight of full order maps to 1.
    if len(factors) == 1:
        f = factors[0]
        for img in imgs:
            if math.gcd(img[0], f) == 1:
                u = pow(img[0], -1, f)
                imgs = [[(x[0] * u) % f] for x in imgs]
                break
    return FundGroupInfo(factors, tuple(tuple(x) for x in imgs))


def determinant(d: RootDatum) -> int:
    return intlat.determinant(d.cartan)
