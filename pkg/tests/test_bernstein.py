from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from basechange.bernstein import (
    CenterElement,
    base_change,
    bernstein_coeff,
    bernstein_function,
    regroup,
)
from basechange.scalar import Scalar
from basechange.weyl import Cocharacter, WeylElt, admissible_set, bar, length

U, Q = Scalar.u(), Scalar.q()

dominant = st.builds(
    lambda j, d: Cocharacter(j + d, j), st.integers(-5, 5), st.integers(0, 8)
)


@given(dominant)
def test_top_length_coefficient(mu):
    for w in admissible_set(mu):
        if length(w) == mu.length:
            assert bernstein_coeff(mu, w) == U ** (-mu.length)


@given(dominant)
def test_gap_one_coefficient(mu):
    for w in admissible_set(mu):
        if length(w) == mu.length - 1:
            assert bernstein_coeff(mu, w) == U ** (-mu.length) * (1 - Q)


def test_numeric_example():
    c = bernstein_coeff(Cocharacter(1, -1), WeylElt(0, 0, 0))
    assert c.evaluate(2) == Fraction(1, 2)


def test_non_admissible_is_zero():
    mu = Cocharacter(0, -1)
    assert bernstein_coeff(mu, WeylElt(1, 0, 1)).is_zero()
    assert bernstein_coeff(mu, WeylElt(0, 0, 0)).is_zero()


def test_non_dominant_rejected():
    with pytest.raises(ValueError):
        bernstein_coeff(Cocharacter(-2, 0), WeylElt(0, 0, 2))


def test_center_examples():
    z = bernstein_function(Cocharacter(2, 2))
    assert z.coeffs == {WeylElt(0, 0, -4): Scalar.const(1)}
    z = bernstein_function(Cocharacter(0, -1))
    assert z[WeylElt(0, 1, 1)] == U**-1 == z[WeylElt(-1, 1, 1)]
    assert z[WeylElt(0, 0, 1)] == U**-1 * (1 - Q)
    assert len(bernstein_function(Cocharacter(3, -2))) == 11


def test_denominator_cancels():
    for ell in range(9):
        mu = Cocharacter(ell, 0)
        for w in admissible_set(mu):
            c = bernstein_coeff(mu, w)
            # a pure Laurent polynomial in u
            assert c.den == (0,) * (len(c.den) - 1) + (1,)


def test_base_change_examples():
    mu = Cocharacter(0, -1)
    assert base_change(mu, 1) == bernstein_function(mu)
    assert base_change(mu, 2) == bernstein_function(Cocharacter(0, -2))
    for f in (1, 2, 3):
        for mu in (Cocharacter(2, -1), Cocharacter(1, 1), Cocharacter(4, 0)):
            assert len(base_change(mu, f)) == 2 * f * mu.length + 1


def test_extension_coefficients_substitute_q():
    mu = Cocharacter(1, -1)
    for w in admissible_set(mu):
        assert bernstein_coeff(mu, w, f=3) == bernstein_coeff(mu, w).subs_power(3)


def test_regroup_examples():
    r = regroup(bernstein_function(Cocharacter(1, 1)))
    assert len(r.zero_term) == 1 and not r.odd_pairs and not r.even_pairs
    r = regroup(bernstein_function(Cocharacter(0, -1)))
    assert len(r.odd_pairs) == 1 and not r.even_pairs
    r = regroup(bernstein_function(Cocharacter(1, -1)))
    assert len(r.odd_pairs) == 1 and len(r.even_pairs) == 1
    assert set(r.even_pairs[0]) == {WeylElt(-1, 0, 0), WeylElt(1, 0, 0)}


@given(dominant)
def test_regroup_reassembles(mu):
    z = bernstein_function(mu)
    r = regroup(z)
    assert r.reassemble() == z
    for pair in (*r.odd_pairs, *r.even_pairs):
        assert len(pair) == 2
        w1, w2 = pair
        assert bar(w1) == w2 and length(w1) == length(w2)


@given(dominant)
def test_coefficient_is_bar_invariant(mu):
    z = bernstein_function(mu)
    for w in z:
        assert z[bar(w)] == z[w]


def test_center_element_rejects_mixed_sizes():
    with pytest.raises(ValueError):
        CenterElement({WeylElt(0, 0, 0): Scalar.const(1), WeylElt(0, 0, 1): Scalar.const(1)})
