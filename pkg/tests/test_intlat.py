import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gammatorsion import intlat
from gammatorsion.intlat import FinAbGroup


def frac_det(m):
    """Gaussian elimination over Q; an oracle independent of the Bareiss code."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det)


def determinantal_divisors(m):
    rows, cols = len(m), len(m[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                g = math.gcd(g, frac_det([[m[r][c] for c in ci] for r in ri]))
        if g == 0:
            break
        out.append(g)
    return out


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_matches_determinantal_divisors(m):
    snf = intlat.smith_normal_form(m)
    divs = determinantal_divisors(m)
    expected = [divs[0]] + [b // a for a, b in zip(divs, divs[1:])] if divs else []
    assert [x for x in snf.diag if x] == expected
    assert intlat.matmul(intlat.matmul(snf.left, m), snf.right) == snf.diagonal_matrix()
    assert abs(frac_det(snf.left)) == 1 and abs(frac_det(snf.right)) == 1
    nz = [x for x in snf.diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_hnf_is_echelon_and_row_equivalent(m):
    h, u = intlat.hermite_normal_form(m)
    assert intlat.matmul(u, m)[:len(h)] == h
    pivots = [next(j for j, x in enumerate(row) if x) for row in h]
    assert pivots == sorted(set(pivots))
    for r, p in enumerate(pivots):
        assert h[r][p] > 0
        assert all(0 <= h[s][p] < h[r][p] for s in range(r))


def test_determinant_small_cases():
    assert intlat.determinant([[2, -1], [-1, 2]]) == 3
    assert intlat.determinant([[2, -1, 0], [-1, 2, -1], [0, -2, 2]]) == 2
    assert intlat.determinant([]) == 1


@pytest.mark.parametrize("gens, expected", [
    ([[2, 0], [0, 3]], FinAbGroup(0, (6,))),
    ([[2, 0], [0, 2]], FinAbGroup(0, (2, 2))),
    ([[4, 6]], FinAbGroup(1, (2,))),
    ([], FinAbGroup(3, ())),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], FinAbGroup(0, ())),
])
def test_quotient_group(gens, expected):
    assert intlat.quotient_group(len(gens[0]) if gens else 3, gens) == expected


def test_lattice_member_returns_certificate():
    gens = [[2, 0], [1, 3]]
    ok, coeffs = intlat.lattice_member(gens, [5, 9])
    assert ok and [sum(c * g[k] for c, g in zip(coeffs, gens)) for k in range(2)] == [5, 9]
    ok, coeffs = intlat.lattice_member(gens, [1, 0])
    assert not ok and coeffs is None


def test_element_order():
    gens = [[6, 0], [0, 1]]
    assert intlat.element_order(gens, [1, 0]) == 6
    assert intlat.element_order(gens, [2, 5]) == 3
    assert intlat.element_order(gens, [0, 7]) == 1
    assert intlat.element_order([[1, 0]], [0, 1]) == 0


def test_sublattice_with_zero_prefix():
    # combinations killing the first coordinate: spanned by (0, 2) and (0, 3) -> (0, 1)
    gens = [[1, 1], [1, -1], [2, 5]]
    sub = intlat.sublattice_with_zero_prefix(gens, 1, 2)
    assert intlat.quotient_group(1, sub) == FinAbGroup(0, ())
    # a(1,1,0) - a(1,0,1) + c(0,0,4): the tail lattice is spanned by (1,-1) and (0,4)
    sub = intlat.sublattice_with_zero_prefix([[1, 1, 0], [1, 0, 1], [0, 0, 4]], 1, 3)
    assert intlat.quotient_group(2, sub) == FinAbGroup(0, (4,))


def test_inverse_unimodular():
    m = [[2, 1], [1, 1]]
    assert intlat.matmul(m, intlat.inverse_unimodular(m)) == intlat.identity(2)


class TestFinAbGroup:
    def test_normalizes_cyclic_orders(self):
        assert FinAbGroup.from_cyclic([4, 6]) == FinAbGroup(0, (2, 12))
        assert FinAbGroup.from_cyclic([1, 3, 0]) == FinAbGroup(1, (3,))

    def test_rejects_bad_chain(self):
        with pytest.raises(ValueError):
            FinAbGroup(0, (4, 6))
        with pytest.raises(ValueError):
            FinAbGroup(0, (1,))

    def test_arithmetic_and_str(self):
        g = FinAbGroup(2, (2, 6))
        assert g.order == 12 and g.torsion == FinAbGroup(0, (2, 6))
        assert str(g) == "Z/2 + Z/6 + Z^2"
        assert str(FinAbGroup()) == "0"
        assert g.multiple(2) == FinAbGroup(2, (3,))
        assert FinAbGroup(0, (2,)) + FinAbGroup(0, (3,)) == FinAbGroup(0, (6,))
        assert FinAbGroup().is_trivial
