"""The maps phi_m / psi_m between Z[Lambda] and the truncated symmetric algebra,
Dynkin indices, the special cycle and the type-A cubic invariant."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from .groupring import GroupRingElement, chern1_k0, orbit_sum
from .rootsys import (DEFAULT_ORBIT_CEILING, InvalidTypeError, RootDatum, highest_root, invariant_form_q,
                      long_roots, orbit_array, short_roots)
from .symtrunc import Exponent, TruncatedPolynomial, monomial_basis
from .symtrunc import evaluate_at_coroot


class IndexIntegralityError(ArithmeticError):
    """Raised when the Dynkin index of a non-invariant element is not well defined."""


def _rising(a: np.ndarray, k: int) -> np.ndarray:
    """Coefficient of x^k in (1 - x)^{-a}: a (a+1) ... (a+k-1) / k!, elementwise."""
    out = np.ones_like(a)
    for t in range(k):
        out = out * (a + t)
    return out // math.factorial(k)


def _all_monomials(rank: int, cap: int) -> list[Exponent]:
    return [e for deg in range(cap + 1) for e in monomial_basis(rank, deg)]


def phi_arrays(exps: np.ndarray, coeffs: Sequence[int] | np.ndarray, cap: int,
               threads: int = 1) -> TruncatedPolynomial:
    """phi of ``sum_t coeffs[t] e^{exps[t]}``, vectorized over the terms."""
    if cap < 2:
        raise ValueError("phi_m is only defined for m >= 2")
    m, rank = exps.shape
    coeffs = list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs.tolist()
    if m == 0:
        return TruncatedPolynomial(rank, cap)
    amax = int(np.abs(exps).max())
    cmax = sum(abs(int(c)) for c in coeffs)
    if (amax + cap) ** cap * cmax < 2 ** 62:
        a = exps.astype(np.int64)
        c = np.array(coeffs, dtype=np.int64)
    else:
        a = exps.astype(object)
        c = np.array(coeffs, dtype=object)
    # powers[k][:, i] = coefficient of w_i^k in phi(e^{a_i w_i})
    powers = [None] + [_rising(a, k) for k in range(1, cap + 1)]
    monos = _all_monomials(rank, cap)

    def coeff(e: Exponent) -> int:
        col = None
        for i, k in enumerate(e):
            if k:
                v = powers[k][:, i]
                col = v if col is None else col * v
        if col is None:
            return int(sum(int(x) for x in coeffs))
        return int(np.dot(col, c))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            values = list(ex.map(coeff, monos))
    else:
        values = [coeff(e) for e in monos]
    return TruncatedPolynomial(rank, cap, dict(zip(monos, values)))


def phi(x: GroupRingElement, cap: int, threads: int = 1) -> TruncatedPolynomial:
    """``phi_cap``: e^{sum a_i w_i} -> prod (1 - w_i)^{-a_i}, truncated above degree ``cap``."""
    exps, coeffs = x.arrays()
    return phi_arrays(exps, coeffs, cap, threads)


def phi_orbit(d: RootDatum, lam: Sequence[int], cap: int, ceiling: int = DEFAULT_ORBIT_CEILING,
              threads: int = 1) -> TruncatedPolynomial:
    """phi of the orbit sum of ``lam`` without materializing a GroupRingElement."""
    orb = orbit_array(d, lam, ceiling)
    return phi_arrays(orb, np.ones(len(orb), dtype=np.int64), cap, threads)


def psi(p: TruncatedPolynomial) -> GroupRingElement:
    """w_i -> 1 - e^{-w_i}, expanded in Z[Lambda]."""
    n = p.rank
    c1 = [chern1_k0(tuple(int(k == i) for k in range(n))) for i in range(n)]
    pow_cache: dict[tuple[int, int], GroupRingElement] = {}

    def power(i: int, k: int) -> GroupRingElement:
        if (i, k) not in pow_cache:
            pow_cache[(i, k)] = c1[i] ** k
        return pow_cache[(i, k)]

    out = GroupRingElement(n)
    for e, c in p.terms.items():
        term = GroupRingElement.constant(n, c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


def _index_against(exps: np.ndarray, coeffs: Sequence[int], coroot: Sequence[int]) -> int:
    if len(exps) == 0:
        return 0
    p = [int(x) for x in exps @ np.array(coroot, dtype=np.int64)]
    twice = sum(int(c) * x * x for c, x in zip(coeffs, p))
    if twice % 2:
        raise IndexIntegralityError("Dynkin index is a half-integer; input is not W-invariant")
    return twice // 2


def _second_long_root(d: RootDatum):
    top = highest_root(d)
    return next(r for r in long_roots(d) if r.height > 0 and r.weight != top.weight and r.height == 1) \
        if d.rank > 1 else top


def dynkin_index(d: RootDatum, chi: GroupRingElement) -> int:
    """N(chi) = 1/2 sum a_t <lam_t, alpha^vee>^2 for the highest root alpha."""
    exps, coeffs = chi.arrays()
    n = _index_against(exps, coeffs, highest_root(d).coroot)
    other = _second_long_root(d)
    if _index_against(exps, coeffs, other.coroot) != n:
        raise IndexIntegralityError("Dynkin index depends on the long root; input is not W-invariant")
    return n


def dynkin_index_short(d: RootDatum, chi: GroupRingElement) -> int:
    """Same formula against a short root; equals q(short coroot) * dynkin_index."""
    shorts = short_roots(d)
    if not shorts:
        raise InvalidTypeError(f"{d.name} is simply laced; there is no short root")
    delta = max(shorts, key=lambda r: (r.height, r.weight))
    exps, coeffs = chi.arrays()
    return _index_against(exps, coeffs, delta.coroot)


def short_coroot_factor(d: RootDatum) -> int:
    """q evaluated at the coroot of a short root."""
    shorts = short_roots(d)
    if not shorts:
        raise InvalidTypeError(f"{d.name} is simply laced; there is no short root")
    delta = max(shorts, key=lambda r: (r.height, r.weight))
    return evaluate_at_coroot(invariant_form_q(d), delta.coroot)


def orbit_dynkin_index(d: RootDatum, lam: Sequence[int], ceiling: int = DEFAULT_ORBIT_CEILING) -> int:
    orb = orbit_array(d, lam, ceiling)
    return _index_against(orb, np.ones(len(orb), dtype=np.int64).tolist(), highest_root(d).coroot)


def fundamental_indices(d: RootDatum, ceiling: int = DEFAULT_ORBIT_CEILING, threads: int = 1) -> list[int]:
    ws = [d.fundamental_weight(i) for i in range(d.rank)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(lambda w: orbit_dynkin_index(d, w, ceiling), ws))
    return [orbit_dynkin_index(d, w, ceiling) for w in ws]


def dynkin_index_group(d: RootDatum, ceiling: int = DEFAULT_ORBIT_CEILING, threads: int = 1) -> int:
    """N(G): gcd of N over the fundamental orbit sums.

    Characters of representations and dominant orbit sums span the same lattice,
    every orbit sum is a polynomial in the fundamental ones, and
    N(xy) = aug(x) N(y) + aug(y) N(x); so the gcd over fundamental orbits is the gcd
    over all characters.
    """
    return math.gcd(*fundamental_indices(d, ceiling, threads))


def special_cycle(d: RootDatum) -> GroupRingElement:
    """theta = sum_{i<=j} c_ij (1 - e^{-w_i})(1 - e^{-w_j}) for q = sum c_ij w_i w_j."""
    q = invariant_form_q(d)
    n = d.rank
    c1 = [chern1_k0(d.fundamental_weight(i)) for i in range(n)]
    out = GroupRingElement(n)
    for e, c in q.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        out = out + c * (c1[idx[0]] * c1[idx[1]])
    return out


def _require_type_a(d: RootDatum) -> None:
    if d.family != "A" or d.rank < 2:
        raise InvalidTypeError(f"needs type A_n with n >= 2, got {d.name}")


def f3(d: RootDatum) -> TruncatedPolynomial:
    """The degree-3 basic invariant of A_n in the fundamental-weight basis."""
    _require_type_a(d)
    n = d.rank
    terms = {}
    for i in range(1, n):
        e = [0] * n
        e[i - 1], e[i] = 2, 1
        terms[tuple(e)] = 1
        e = [0] * n
        e[i - 1], e[i] = 1, 2
        terms[tuple(e)] = -1
    return TruncatedPolynomial(n, 3, terms)


def delta(d: RootDatum) -> GroupRingElement:
    """W e^{w_1} - W e^{w_n} in type A_n."""
    _require_type_a(d)
    return orbit_sum(d, d.fundamental_weight(0)) - orbit_sum(d, d.fundamental_weight(d.rank - 1))
