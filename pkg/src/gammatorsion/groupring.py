"""The integral group ring Z[Lambda]: finite sums of exponentials e^lam."""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .rootsys import DEFAULT_ORBIT_CEILING, RootDatum, Weight, orbit_array, simple_reflection


class GroupRingElement:
    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: Mapping[Sequence[int], int] | None = None):
        self.rank = rank
        clean: dict[Weight, int] = {}
        for w, c in (terms or {}).items():
            w = tuple(int(x) for x in w)
            if len(w) != rank:
                raise ValueError(f"weight {w} has wrong length for rank {rank}")
            if c:
                clean[w] = clean.get(w, 0) + int(c)
        self.terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def exp(cls, lam: Sequence[int], c: int = 1) -> "GroupRingElement":
        return cls(len(lam), {tuple(lam): c})

    @classmethod
    def constant(cls, rank: int, c: int = 1) -> "GroupRingElement":
        return cls(rank, {(0,) * rank: c})

    @classmethod
    def _from_clean(cls, rank: int, terms: dict) -> "GroupRingElement":
        out = object.__new__(cls)
        out.rank = rank
        out.terms = terms
        return out

    def _coerce(self, other) -> "GroupRingElement":
        if isinstance(other, int):
            return GroupRingElement.constant(self.rank, other)
        if not isinstance(other, GroupRingElement):
            raise TypeError(f"cannot combine group ring element with {type(other).__name__}")
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        return other

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = GroupRingElement.constant(self.rank, other)
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other) -> "GroupRingElement":
        other = self._coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return GroupRingElement._from_clean(self.rank, out)

    __radd__ = __add__

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement._from_clean(self.rank, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> "GroupRingElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "GroupRingElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "GroupRingElement":
        if isinstance(other, int):
            if not other:
                return GroupRingElement(self.rank)
            return GroupRingElement._from_clean(self.rank, {w: c * other for w, c in self.terms.items()})
        other = self._coerce(other)
        out: dict[Weight, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = tuple(a + b for a, b in zip(w1, w2))
                out[w] = out.get(w, 0) + c1 * c2
        return GroupRingElement(self.rank, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "GroupRingElement":
        out = GroupRingElement.constant(self.rank)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self) -> str:
        return f"GroupRingElement({format_element(self)})"

    def arrays(self) -> tuple[np.ndarray, list[int]]:
        """Exponents as an ``(nterms, rank)`` int array plus the coefficient list."""
        if not self.terms:
            return np.zeros((0, self.rank), dtype=np.int64), []
        keys = sorted(self.terms)
        return np.array(keys, dtype=np.int64), [self.terms[k] for k in keys]


def add(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    return a + b


def negate(a: GroupRingElement) -> GroupRingElement:
    return -a


def multiply(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    return a * b


def augmentation(a: GroupRingElement) -> int:
    return sum(a.terms.values())


def reflect(d: RootDatum, i: int, a: GroupRingElement) -> GroupRingElement:
    """Apply the simple reflection ``s_i`` to every exponent."""
    return GroupRingElement(a.rank, {simple_reflection(d, i, w): c for w, c in a.terms.items()})


def is_invariant(d: RootDatum, a: GroupRingElement) -> bool:
    return all(reflect(d, i, a) == a for i in range(d.rank))


def orbit_sum(d: RootDatum, lam: Sequence[int], ceiling: int = DEFAULT_ORBIT_CEILING) -> GroupRingElement:
    orb = orbit_array(d, lam, ceiling)
    return GroupRingElement._from_clean(d.rank, {tuple(int(x) for x in row): 1 for row in orb})


def chern1_k0(lam: Sequence[int]) -> GroupRingElement:
    """First K_0 Chern class of the line bundle of ``lam``: ``1 - e^{-lam}``."""
    n = len(lam)
    return GroupRingElement.constant(n) - GroupRingElement.exp(tuple(-x for x in lam))


def iprime_generators(d: RootDatum, ceiling: int = DEFAULT_ORBIT_CEILING) -> list[GroupRingElement]:
    """``rho_i = W e^{w_i} - |W w_i|``, one per fundamental weight.

    Z[Lambda]^W is the polynomial ring on the fundamental orbit sums (the group
    is simply connected), so these generate the augmentation-kernel ideal I'.
    """
    out = []
    for i in range(d.rank):
        s = orbit_sum(d, d.fundamental_weight(i), ceiling)
        out.append(s - len(s))
    return out


def format_element(a: GroupRingElement, var: str = "w") -> str:
    if not a.terms:
        return "0"
    parts = []
    for w in sorted(a.terms, key=lambda w: (tuple(abs(x) for x in w) != (0,) * len(w), w)):
        c = a.terms[w]
        expo = " + ".join(f"{x}{var}{i + 1}" if x != 1 else f"{var}{i + 1}"
                          for i, x in enumerate(w) if x).replace("+ -", "- ")
        if not expo:
            body = str(abs(c))
        else:
            body = (f"{abs(c)}*" if abs(c) != 1 else "") + f"e^({expo})"
        parts.append(("- " if c < 0 else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]
