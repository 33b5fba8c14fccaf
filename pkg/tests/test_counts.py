import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from basechange.counts import (
    CaseParams,
    InvalidCaseParams,
    count_delta_sigma,
    count_delta_sigma_formal,
    count_gamma,
    count_gamma_formal,
    is_prime_power,
)
from basechange.scalar import Scalar
from basechange.weyl import WeylElt, elements_of

PRIME_POWERS = (2, 3, 4, 5, 7, 8, 9)


def all_params(qs=PRIME_POWERS, fs=(1, 2, 3), as_=range(6), ss=(-1, 0, 1, 2)):
    for q, f, a, s, ram in itertools.product(qs, fs, as_, ss, (False, True)):
        split = (not ram) and f % 2 == 0
        diffs = (0, 2) if split and s % 2 == 0 else (None,)
        for e in diffs:
            yield CaseParams(q=q, f=f, a=a, ramified=ram, s=s, split_in_E=split, eigen_diff_mod4=e)


def test_prime_powers():
    assert [n for n in range(1, 30) if is_prime_power(n)] == [
        2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29
    ]


def test_gamma_examples():
    assert count_gamma(WeylElt(0, 0, 1), CaseParams(q=5, ramified=True, s=1)) == 1
    assert count_gamma(WeylElt(0, 0, 0), CaseParams(q=3, a=1)) == 4
    assert count_gamma(WeylElt(0, 0, 2), CaseParams(q=7, a=0, s=2)) == 0
    # the elliptic element of order four at p = 3 has a = 0
    assert count_gamma(WeylElt(0, 1, 0), CaseParams(q=3, a=0)) == 4
    assert count_gamma(WeylElt(-1, 1, 0), CaseParams(q=3, a=0)) == 0


def test_delta_sigma_examples():
    p = CaseParams(q=2, f=2, a=1, ramified=True, s=0)
    assert count_delta_sigma(WeylElt(-1, 1, 0), p) == 10
    assert count_delta_sigma(WeylElt(0, 1, 0), p) == 10
    p = CaseParams(q=2, f=2, a=1, s=0, split_in_E=True, eigen_diff_mod4=0)
    assert count_delta_sigma(WeylElt(-1, 1, 0), p) == 12
    assert count_delta_sigma(WeylElt(0, 1, 0), p) == 2
    p = CaseParams(q=2, f=2, a=1, s=0, split_in_E=True, eigen_diff_mod4=2)
    assert count_delta_sigma(WeylElt(-1, 1, 0), p) == 2
    assert count_delta_sigma(WeylElt(0, 1, 0), p) == 12


def test_ramified_odd_counts_are_powers():
    p = CaseParams(q=3, ramified=True, s=-1)
    for r in range(6):
        for w in elements_of(2 * r, -1):
            assert count_gamma(w, p) == 3**r
        assert count_gamma(elements_of(2 * r + 1, -1)[0], p) == 0


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(q=6),
        dict(q=2, f=0),
        dict(q=2, a=-1),
        dict(q=2, f=2, ramified=True, split_in_E=True),
        dict(q=2, f=2),  # unramified torus must split over an even degree extension
        dict(q=2, f=3, split_in_E=True),
        dict(q=2, f=2, split_in_E=True, s=0),  # missing eigenvalue data
        dict(q=2, f=2, split_in_E=True, s=1, eigen_diff_mod4=0),
        dict(q=2, f=2, split_in_E=True, s=0, eigen_diff_mod4=1),
        dict(q=2, d_T=-1),
    ],
)
def test_invalid_params(kwargs):
    with pytest.raises(InvalidCaseParams):
        CaseParams(**kwargs)


def test_all_counts_are_integers():
    # count_* raises if a division by q - 1 is not exact
    for p in all_params():
        for n in range(14):
            for w in elements_of(n, p.s):
                assert count_gamma(w, p) >= 0
                assert count_delta_sigma(w, p) >= 0


def test_size_mismatch_is_zero():
    for p in all_params(qs=(3,), as_=(0, 2)):
        for n in range(6):
            for w in elements_of(n, p.s + 1):
                assert count_gamma(w, p) == 0 == count_delta_sigma(w, p)


def test_f1_degeneration():
    for p in all_params(fs=(1,)):
        for n in range(14):
            for w in elements_of(n, p.s):
                assert count_delta_sigma(w, p) == count_gamma(w, p)


def test_support_shape():
    for p in all_params(qs=(2, 3), as_=range(4)):
        flips = p.s % 2 == 1 and (p.ramified or p.split_in_E)
        for n in range(1, 12):
            vals = [count_delta_sigma(w, p) for w in elements_of(n, p.s)]
            if flips and n % 2 == 1 or not flips and n % 2 == 0:
                assert vals == [0, 0]


def test_pair_symmetry():
    for p in all_params(qs=(2, 3, 5), as_=range(4)):
        for r in range(1, 6):
            first, second = WeylElt(-r, 1, p.s), WeylElt(r - 1, 1, p.s)
            c1, c2 = count_delta_sigma(first, p), count_delta_sigma(second, p)
            if p.ramified:
                assert c1 == c2
            elif not (p.split_in_E and p.s % 2):
                q, f, a = Fraction(p.q), p.f, p.a
                L = q ** (f * r) * (
                    (1 - q ** (1 - f)) * (q ** (a - 1) - 1) / (q - 1) + (q + 1) * q ** (a - 1)
                )
                S = q ** (f * r) * (1 - q ** (1 - f)) * (q**a - 1) / (q - 1)
                assert sorted((c1, c2)) == sorted((L, S))


def test_formal_matches_numeric():
    for p in all_params(qs=(2, 3), as_=range(4)):
        for n in range(8):
            for w in elements_of(n, p.s):
                assert count_gamma_formal(w, p).evaluate(p.q) == count_gamma(w, p)
                assert count_delta_sigma_formal(w, p).evaluate(p.q) == count_delta_sigma(w, p)


def test_formal_counts_are_polynomials_in_q():
    for p in all_params(qs=(2,), as_=range(4)):
        for n in range(6):
            for w in elements_of(n, p.s):
                c = count_delta_sigma_formal(w, p)
                assert c.den == (1,)
                assert all(k % 2 == 0 for k, x in enumerate(c.num) if x)


@given(
    st.sampled_from(PRIME_POWERS),
    st.integers(1, 3),
    st.integers(0, 5),
    st.integers(-3, 3),
    st.booleans(),
    st.sampled_from([0, 2]),
    st.integers(0, 7),
)
def test_bar_sums_match_formal(q, f, a, s, ram, e, n):
    split = (not ram) and f % 2 == 0
    p = CaseParams(
        q=q, f=f, a=a, ramified=ram, s=s, split_in_E=split,
        eigen_diff_mod4=e if split and s % 2 == 0 else None,
    )
    ws = elements_of(n, s)
    total = sum(count_delta_sigma(w, p) for w in ws)
    formal = sum((count_delta_sigma_formal(w, p) for w in ws), Scalar())
    assert formal.evaluate(q) == total
