"""Integer polynomials in w1..wn with every monomial of degree > cap dropped."""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class TruncatedPolynomial:
    __slots__ = ("rank", "cap", "terms")

    def __init__(self, rank: int, cap: int, terms: Mapping[Exponent, int] | None = None):
        self.rank = rank
        self.cap = cap
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != rank:
                raise ValueError(f"exponent {e} has wrong length for rank {rank}")
            if c and sum(e) <= cap:
                clean[e] = clean.get(e, 0) + int(c)
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def constant(cls, rank: int, cap: int, c: int = 1) -> "TruncatedPolynomial":
        return cls(rank, cap, {(0,) * rank: c})

    @classmethod
    def variable(cls, rank: int, cap: int, i: int, c: int = 1) -> "TruncatedPolynomial":
        e = [0] * rank
        e[i] = 1
        return cls(rank, cap, {tuple(e): c})

    @classmethod
    def linear(cls, cap: int, coeffs: Sequence[int]) -> "TruncatedPolynomial":
        n = len(coeffs)
        return cls(n, cap, {tuple(int(k == i) for k in range(n)): c for i, c in enumerate(coeffs)})

    def _check(self, other: "TruncatedPolynomial") -> None:
        if self.rank != other.rank or self.cap != other.cap:
            raise ValueError(f"rank/cap mismatch: ({self.rank},{self.cap}) vs ({other.rank},{other.cap})")

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.terms == ({(0,) * self.rank: other} if other else {})
        if not isinstance(other, TruncatedPolynomial):
            return NotImplemented
        return (self.rank, self.cap, self.terms) == (other.rank, other.cap, other.terms)

    def __hash__(self):
        return hash((self.rank, self.cap, frozenset(self.terms.items())))

    def _coerce(self, other) -> "TruncatedPolynomial":
        if isinstance(other, int):
            return TruncatedPolynomial.constant(self.rank, self.cap, other)
        self._check(other)
        return other

    def __add__(self, other) -> "TruncatedPolynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return TruncatedPolynomial(self.rank, self.cap, out)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedPolynomial":
        return TruncatedPolynomial(self.rank, self.cap, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "TruncatedPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TruncatedPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "TruncatedPolynomial":
        if isinstance(other, int):
            return TruncatedPolynomial(self.rank, self.cap, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out: dict[Exponent, int] = {}
        cap = self.cap
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if d1 + sum(e2) > cap:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return TruncatedPolynomial(self.rank, cap, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncatedPolynomial":
        out = TruncatedPolynomial.constant(self.rank, self.cap)
        for _ in range(k):
            out = out * self
        return out

    def with_cap(self, cap: int) -> "TruncatedPolynomial":
        return TruncatedPolynomial(self.rank, cap, self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: int) -> bool:
        return all(sum(e) == d for e in self.terms)

    def coefficient(self, e: Sequence[int]) -> int:
        return self.terms.get(tuple(e), 0)

    def coordinates(self, d: int) -> list[int]:
        """Coefficients of the degree-``d`` part in ``monomial_basis`` order."""
        return [self.terms.get(e, 0) for e in monomial_basis(self.rank, d)]

    def __repr__(self) -> str:
        return f"TruncatedPolynomial({format_polynomial(self)}, cap={self.cap})"

    def __str__(self) -> str:
        return format_polynomial(self)


def graded_part(a: TruncatedPolynomial, d: int) -> TruncatedPolynomial:
    if not 0 <= d <= a.cap:
        raise ValueError(f"degree {d} outside 0..{a.cap}")
    return TruncatedPolynomial(a.rank, a.cap, {e: c for e, c in a.terms.items() if sum(e) == d})


def evaluate_at_coroot(a: TruncatedPolynomial, coroot: Sequence[int]) -> int:
    """Evaluate with ``w_i -> coroot[i]`` (coefficients of the coroot on the simple coroots)."""
    if len(coroot) != a.rank:
        raise ValueError("coroot vector has the wrong length")
    return sum(c * math.prod(int(x) ** k for x, k in zip(coroot, e)) for e, c in a.terms.items())


def monomial_basis(rank: int, d: int) -> list[Exponent]:
    """Degree-``d`` exponent vectors in graded-lex order (w1^2, w1 w2, ..., wn^2 for d = 2)."""
    out = []
    for combo in itertools.combinations_with_replacement(range(rank), d):
        e = [0] * rank
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def from_coordinates(rank: int, cap: int, d: int, coords: Sequence[int]) -> TruncatedPolynomial:
    return TruncatedPolynomial(rank, cap, dict(zip(monomial_basis(rank, d), coords)))


def substitute_linear(a: TruncatedPolynomial, images: Sequence[Sequence[int]]) -> TruncatedPolynomial:
    """Ring map ``w_i -> sum_k images[i][k] w_k``."""
    lin = [TruncatedPolynomial.linear(a.cap, img) for img in images]
    out = TruncatedPolynomial(a.rank, a.cap)
    for e, c in a.terms.items():
        term = TruncatedPolynomial.constant(a.rank, a.cap, c)
        for i, k in enumerate(e):
            if k:
                term = term * lin[i] ** k
        out = out + term
    return out


def format_polynomial(a: TruncatedPolynomial, var: str = "w") -> str:
    if not a.terms:
        return "0"
    keys = sorted(a.terms, key=lambda e: (sum(e), tuple(-x for x in e)))
    parts = []
    for e in keys:
        c = a.terms[e]
        mono = "*".join(f"{var}{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        parts.append(("- " if c < 0 else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def total(polys: Iterable[TruncatedPolynomial], rank: int, cap: int) -> TruncatedPolynomial:
    out = TruncatedPolynomial(rank, cap)
    for p in polys:
        out = out + p
    return out
