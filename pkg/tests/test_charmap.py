import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gammatorsion import charmap
from gammatorsion.charmap import (IndexIntegralityError, delta, dynkin_index, dynkin_index_group, dynkin_index_short,
                                  f3, phi, phi_arrays, phi_orbit, psi, short_coroot_factor, special_cycle)
from gammatorsion.groupring import GroupRingElement, orbit_sum
from gammatorsion.rootsys import InvalidTypeError, invariant_form_q, parse_type
from gammatorsion.symtrunc import TruncatedPolynomial, graded_part

weights = st.tuples(st.integers(-4, 4), st.integers(-4, 4))
elements = st.dictionaries(weights, st.integers(-3, 3), max_size=4).map(lambda t: GroupRingElement(2, t))
polys = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-4, 4), max_size=5).map(
    lambda t: TruncatedPolynomial(2, 3, t))


@settings(max_examples=50, deadline=None)
@given(elements, elements)
def test_phi_is_a_ring_map(a, b):
    assert phi(a * b, 3) == phi(a, 3) * phi(b, 3)
    assert phi(a + b, 3) == phi(a, 3) + phi(b, 3)


@settings(max_examples=40, deadline=None)
@given(polys)
def test_phi_inverts_psi(p):
    assert phi(psi(p), 3) == p


def test_phi_of_exponentials():
    w = TruncatedPolynomial.variable(1, 3, 0)
    assert phi(GroupRingElement.exp((1,)), 3) == 1 + w + w * w + w * w * w
    assert phi(GroupRingElement.exp((-1,)), 3) == 1 - w
    assert phi(GroupRingElement.exp((-2,)), 3) == 1 - 2 * w + w * w
    with pytest.raises(ValueError):
        phi(GroupRingElement.exp((1,)), 1)


def test_phi_big_exponents_use_exact_path():
    exps = np.array([[10 ** 6, -10 ** 6]], dtype=np.int64)
    p = phi_arrays(exps, [7], 3)
    a = 10 ** 6
    assert p.coefficient((3, 0)) == 7 * a * (a + 1) * (a + 2) // 6
    assert p.coefficient((0, 3)) == 7 * (-a) * (-a + 1) * (-a + 2) // 6


def test_phi_threads_do_not_change_result():
    d = parse_type("E6")
    lam = (0, 1, 0, 0, 0, 0)
    assert phi_orbit(d, lam, 3, threads=1) == phi_orbit(d, lam, 3, threads=4)


def test_special_cycle_maps_to_q():
    for name in ("B3", "G2", "E6"):
        d = parse_type(name)
        assert phi(special_cycle(d), 2) == invariant_form_q(d).with_cap(2)


@pytest.mark.parametrize("name, n", [
    ("A1", 1), ("A5", 1), ("C3", 1), ("B3", 2), ("B4", 2), ("D4", 2), ("D5", 2), ("G2", 2),
    ("F4", 6), ("E6", 6), ("E7", 12),
])
def test_dynkin_index_group(name, n):
    assert dynkin_index_group(parse_type(name)) == n


def test_dynkin_index_of_small_representations():
    # adjoint of A1: weights 2, 0, -2 -> index 4; defining rep of A2 -> 1
    a1 = parse_type("A1")
    adj = orbit_sum(a1, (2,)) + 1
    assert dynkin_index(a1, adj) == 4
    assert dynkin_index(parse_type("A2"), orbit_sum(parse_type("A2"), (1, 0))) == 1


def test_dynkin_index_rejects_non_invariant():
    with pytest.raises(IndexIntegralityError):
        dynkin_index(parse_type("A1"), GroupRingElement.exp((1,)))
    with pytest.raises(IndexIntegralityError):
        dynkin_index(parse_type("A2"), GroupRingElement.exp((1, 1)))


def test_short_root_variants():
    assert short_coroot_factor(parse_type("G2")) == 3
    assert short_coroot_factor(parse_type("B3")) == 2
    d = parse_type("C3")
    chi = orbit_sum(d, (1, 0, 0))
    assert dynkin_index_short(d, chi) == 2 * dynkin_index(d, chi)
    with pytest.raises(InvalidTypeError):
        dynkin_index_short(parse_type("E6"), GroupRingElement.constant(6))
    with pytest.raises(InvalidTypeError):
        short_coroot_factor(parse_type("A3"))


def test_type_a_cubic():
    d = parse_type("A2")
    assert str(f3(d)) == "w1^2*w2 - w1*w2^2"
    p = phi(delta(d), 3)
    assert graded_part(p, 3) == f3(d)
    with pytest.raises(InvalidTypeError):
        f3(parse_type("B2"))
    with pytest.raises(InvalidTypeError):
        delta(parse_type("A1"))


def test_fundamental_indices_thread_invariance():
    d = parse_type("F4")
    assert charmap.fundamental_indices(d, threads=1) == charmap.fundamental_indices(d, threads=3) == [12, 144, 72, 6]
