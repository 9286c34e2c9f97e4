"""Torsion in the gamma-filtration quotients of the Borel variety, Steinberg
weights and the rationality certificate for the special cycle.

The quotient gamma^m / (gamma^{m+1} + I') is coordinatized through phi_m on
the degree-m monomials (``symtrunc.monomial_basis`` order).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from . import intlat
from .charmap import phi, phi_orbit
from .groupring import GroupRingElement
from .intlat import FinAbGroup
from .rootsys import (DEFAULT_ORBIT_CEILING, RootDatum, Weight, fundamental_group, invariant_form_q,
                      is_negative_root, reflect_word)
from .symtrunc import TruncatedPolynomial, format_polynomial, from_coordinates, monomial_basis

SCHEMA_VERSION = 1
DEFAULT_MAX_RANK_DEGREE3 = 6


class RankBoundError(RuntimeError):
    pass


@dataclass(frozen=True)
class WeylWord:
    """The product ``s_{letters[0]} s_{letters[1]} ...`` (0-based indices)."""

    letters: tuple[int, ...] = ()

    def inverse_apply(self, d: RootDatum, lam: Sequence[int]) -> Weight:
        # w^{-1} = s_{l_k} ... s_{l_1}: the first letter acts first
        for i in self.letters:
            if not 0 <= i < d.rank:
                raise IndexError(f"letter {i} out of range for {d.name}")
        return reflect_word(d, self.letters, lam)

    def apply(self, d: RootDatum, lam: Sequence[int]) -> Weight:
        return WeylWord(self.letters[::-1]).inverse_apply(d, lam)


@dataclass
class TorsionReport:
    type: str
    degree: int
    group: FinAbGroup
    generators: list[str] = field(default_factory=list)
    theta_order: int | None = None

    @property
    def torsion(self) -> FinAbGroup:
        return self.group.torsion

    def doubled(self) -> FinAbGroup:
        """``2 * Tors``: the image of multiplication by 2 on the torsion."""
        return self.torsion.multiple(2)

    def to_json(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "type": self.type,
            "degree": self.degree,
            "free_rank": self.group.free_rank,
            "invariant_factors": list(self.group.invariant_factors),
            "theta_order": self.theta_order,
            "generators": list(self.generators),
        }
        if self.degree == 3:
            out["doubled_invariant_factors"] = list(self.doubled().invariant_factors)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "TorsionReport":
        return cls(data["type"], data["degree"],
                   FinAbGroup(data["free_rank"], tuple(data["invariant_factors"])),
                   list(data.get("generators", [])), data.get("theta_order"))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorsionReport):
            return NotImplemented
        return self.to_json() == other.to_json()


def _multipliers(d: RootDatum, depth: int) -> list[Weight]:
    """0, then -w_j, then -w_j - w_k (j <= k) up to ``depth`` summands."""
    n = d.rank
    out = []
    for k in range(depth + 1):
        for combo in itertools.combinations_with_replacement(range(n), k):
            mu = [0] * n
            for j in combo:
                mu[j] -= 1
            out.append(tuple(mu))
    return out


def iprime_images(d: RootDatum, cap: int, depth: int, ceiling: int = DEFAULT_ORBIT_CEILING,
                  threads: int = 1) -> list[TruncatedPolynomial]:
    """phi_cap(e^mu rho_i) for every multiplier mu of ``_multipliers(d, depth)`` and every i.

    phi is a ring map, so each image is phi(e^mu) * phi(rho_i).
    """
    n = d.rank

    def rho_image(i: int) -> TruncatedPolynomial:
        p = phi_orbit(d, d.fundamental_weight(i), cap, ceiling)
        return p - p.coefficient((0,) * n)

    idx = list(range(n))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            rhos = list(ex.map(rho_image, idx))
    else:
        rhos = [rho_image(i) for i in idx]
    out = []
    for mu in _multipliers(d, depth):
        m = phi(GroupRingElement.exp(mu), cap)
        for r in rhos:
            out.append(m * r)
    return out


def _coordinates(p: TruncatedPolynomial) -> list[int]:
    return [c for deg in range(p.cap + 1) for c in p.coordinates(deg)]


def _quotient_report(d: RootDatum, degree: int, images: list[TruncatedPolynomial]) -> tuple[
        FinAbGroup, list[list[int]], list[str]]:
    n = d.rank
    prefix = sum(len(monomial_basis(n, k)) for k in range(degree))
    dim = len(monomial_basis(n, degree))
    vecs = [_coordinates(p) for p in images]
    sub = intlat.sublattice_with_zero_prefix(vecs, prefix, prefix + dim)
    group = intlat.quotient_group(dim, sub)
    gens = []
    if group.invariant_factors:
        snf = intlat.smith_normal_form(sub)
        vinv = intlat.inverse_unimodular(snf.right)
        for k, dk in enumerate(snf.diag):
            if dk > 1:
                p = from_coordinates(n, degree, degree, vinv[k])
                gens.append(f"Z/{dk}: {format_polynomial(p)}")
    return group, sub, gens


def gamma2_torsion(d: RootDatum, ceiling: int = DEFAULT_ORBIT_CEILING, threads: int = 1,
                   depth: int = 1) -> TorsionReport:
    """gamma^2 / (gamma^3 + I') as S^2 modulo the degree-2 image of I'.

    ``depth`` sets how many ``-w_j`` summands the multipliers e^mu carry; 1 is
    enough because rho_i already lies in gamma^2.
    """
    images = iprime_images(d, 2, depth, ceiling, threads)
    group, sub, gens = _quotient_report(d, 2, images)
    q = invariant_form_q(d)
    order = intlat.element_order(sub, q.coordinates(2))
    return TorsionReport(d.name, 2, group, gens + [f"theta -> q = {format_polynomial(q)}"], order)


def gamma3_torsion(d: RootDatum, ceiling: int = DEFAULT_ORBIT_CEILING, threads: int = 1,
                   max_rank: int = DEFAULT_MAX_RANK_DEGREE3) -> TorsionReport:
    """gamma^3 / (gamma^4 + I'): S^3 modulo the elements of the truncated I'-image
    whose parts in degrees 0, 1 and 2 vanish."""
    if d.rank > max_rank:
        raise RankBoundError(f"degree-3 torsion limited to rank <= {max_rank}; {d.name} has rank {d.rank}")
    images = iprime_images(d, 3, 2, ceiling, threads)
    group, _, gens = _quotient_report(d, 3, images)
    return TorsionReport(d.name, 3, group, gens, None)


def product_torsion(ds: Sequence[RootDatum], degree: int, ceiling: int = DEFAULT_ORBIT_CEILING,
                    threads: int = 1) -> FinAbGroup:
    """Torsion of the gamma quotient of a product of Borel varieties (Kunneth)."""
    if degree not in (2, 3):
        raise ValueError("degree must be 2 or 3")
    out = FinAbGroup()
    for d in ds:
        t2 = gamma2_torsion(d, ceiling, threads).torsion
        if degree == 2:
            out = out + t2
        else:
            out = out + gamma3_torsion(d, ceiling, threads).torsion + t2
    return out


def steinberg_rho(d: RootDatum, w: WeylWord | Sequence[int]) -> Weight:
    """rho_w = sum of w^{-1}(w_i) over the i with w^{-1}(alpha_i) negative."""
    if not isinstance(w, WeylWord):
        w = WeylWord(tuple(w))
    out = [0] * d.rank
    for i in range(d.rank):
        if is_negative_root(d, w.inverse_apply(d, d.simple_root(i))):
            img = w.inverse_apply(d, d.fundamental_weight(i))
            out = [a + b for a, b in zip(out, img)]
    return tuple(out)


@dataclass(frozen=True)
class PairIdentity:
    i: int
    j: int
    lhs: Weight
    rhs: Weight
    coefficient: int
    holds: bool
    transposed_coefficient: int
    holds_with_transposed: bool


def steinberg_pair_identity(d: RootDatum, i: int, j: int) -> PairIdentity:
    """Compare rho_{s_i s_j} with rho_{s_i} + c alpha_j for adjacent i, j.

    The identity holds with c = <alpha_i, alpha_j^vee>.  The transposed entry
    <alpha_j, alpha_i^vee> agrees with it only when both roots have equal length.
    """
    if i == j or d.cartan[i][j] == 0:
        raise ValueError(f"nodes {i} and {j} of {d.name} are not adjacent")
    lhs = steinberg_rho(d, (i, j))
    base = steinberg_rho(d, (i,))
    aj = d.simple_root(j)
    c = d.cartan[j][i]
    ct = d.cartan[i][j]
    rhs = tuple(a + c * b for a, b in zip(base, aj))
    rhs_t = tuple(a + ct * b for a, b in zip(base, aj))
    return PairIdentity(i, j, lhs, rhs, c, lhs == rhs, ct, lhs == rhs_t)


def in_tits_kernel(d: RootDatum, lam: Sequence[int]) -> bool:
    """True when the class of ``lam`` in Lambda / Lambda_r lies in 2 (Lambda / Lambda_r)."""
    fg = fundamental_group(d)
    img = fg.image(lam)
    return all(x % 2 == 0 for x, f in zip(img, fg.invariant_factors) if f % 2 == 0)


def tits_kernel_generators(d: RootDatum) -> list[Weight]:
    """Generators of the lattice of weights killed in (Lambda/Lambda_r) / 2:
    fundamental weights, their doubles, and sums of two or three of them."""
    n = d.rank
    gens: list[Weight] = []
    for k in (1, 2, 3):
        for combo in itertools.combinations(range(n), k):
            lam = tuple(sum(1 for c in combo if c == i) for i in range(n))
            if in_tits_kernel(d, lam):
                gens.append(lam)
    for i in range(n):
        lam = tuple(2 * int(k == i) for k in range(n))
        if lam not in gens:
            gens.append(lam)
    fg = fundamental_group(d)
    even = sum(1 for f in fg.invariant_factors if f % 2 == 0)
    index = intlat.quotient_group(n, gens).order
    # the F_2-rank of Lambda -> G/2G equals the number of even factors (surjective)
    assert index == 2 ** even, (d.name, index)
    return gens


@dataclass(frozen=True)
class CertificateTerm:
    coefficient: int
    left: Weight
    right: Weight

    def expand(self, cap: int = 2) -> TruncatedPolynomial:
        return (TruncatedPolynomial.linear(cap, self.left) * TruncatedPolynomial.linear(cap, self.right)
                * self.coefficient)


@dataclass
class RationalityCertificate:
    holds: bool
    terms: list[CertificateTerm]
    method: str

    def expand(self, rank: int) -> TruncatedPolynomial:
        out = TruncatedPolynomial(rank, 2)
        for t in self.terms:
            out = out + t.expand()
        return out


def _unit(n: int, i: int, k: int = 1) -> Weight:
    return tuple(k * int(j == i) for j in range(n))


def _grouped_certificate(d: RootDatum, q: TruncatedPolynomial) -> list[CertificateTerm] | None:
    """Split q into squares and products of Tits-kernel weights, grouping cross
    terms around a common node when needed (mirrors the hand argument)."""
    n = d.rank
    inL = [in_tits_kernel(d, _unit(n, i)) for i in range(n)]
    terms: list[CertificateTerm] = []
    left: list[tuple[int, int, int]] = []
    for e, c in sorted(q.terms.items(), key=lambda kv: [-x for x in kv[0]]):
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            terms.append(CertificateTerm(c, _unit(n, i), _unit(n, i)))
        elif inL[i] and inL[j]:
            terms.append(CertificateTerm(c, _unit(n, i), _unit(n, j)))
        elif c % 2 == 0 and (inL[i] or inL[j]):
            a, b = (i, j) if inL[i] else (j, i)
            terms.append(CertificateTerm(c // 2, _unit(n, a), _unit(n, b, 2)))
        else:
            left.append((i, j, c))
    for center in range(n):
        if not inL[center] or not left:
            continue
        by_coef: dict[int, list[tuple[int, int, int]]] = {}
        for t in left:
            if center in t[:2]:
                by_coef.setdefault(t[2], []).append(t)
        for c, group in by_coef.items():
            partners = [t[1] if t[0] == center else t[0] for t in group]
            s = tuple(sum(1 for p in partners if p == k) for k in range(n))
            if in_tits_kernel(d, s):
                terms.append(CertificateTerm(c, _unit(n, center), s))
                left = [t for t in left if t not in group]
    return None if left else terms


def theta_rational_certificate(d: RootDatum) -> RationalityCertificate:
    """Decide whether q lies in the span of w_i^2 and of products of two weights
    whose classes lie in 2 (Lambda / Lambda_r).

    This is a sufficient condition for the special cycle to be defined over the
    base when every Tits algebra has index at most 2; a negative answer proves
    nothing.
    """
    n = d.rank
    q = invariant_form_q(d)
    # products are bilinear, so a lattice basis of L spans the same products
    gens = [tuple(row) for row in intlat.hermite_normal_form(tits_kernel_generators(d), n)[0]]
    products: list[tuple[Weight, Weight]] = []
    for a in range(len(gens)):
        for b in range(a, len(gens)):
            products.append((gens[a], gens[b]))
    products += [(_unit(n, i), _unit(n, i)) for i in range(n)]
    rows = [CertificateTerm(1, x, y).expand().coordinates(2) for x, y in products]
    holds, coeffs = intlat.lattice_member(rows, q.coordinates(2))
    if not holds:
        return RationalityCertificate(False, [], "lattice")
    grouped = _grouped_certificate(d, q)
    if grouped is not None:
        cert = RationalityCertificate(True, grouped, "grouped")
    else:
        cert = RationalityCertificate(True, [CertificateTerm(c, x, y)
                                             for c, (x, y) in zip(coeffs, products) if c], "lattice")
    assert cert.expand(n) == q
    return cert
