import pytest
from hypothesis import given, strategies as st

from basechange.weyl import (
    IDENTITY,
    S0,
    S1,
    TAU,
    Cocharacter,
    SemidirectForm,
    WeylElt,
    admissible_set,
    bar,
    elements_of,
    from_semidirect,
    inverse,
    is_admissible,
    iter_box,
    length,
    multiply,
    size,
    to_semidirect,
    translation,
)

elts = st.builds(
    WeylElt, st.integers(-30, 30), st.integers(0, 1), st.integers(-30, 30)
)
cochars = st.builds(Cocharacter, st.integers(-10, 10), st.integers(-10, 10))


@pytest.mark.parametrize(
    "w, lam, sw",
    [
        (WeylElt(0, 0, 0), (0, 0), 0),
        (WeylElt(0, 0, 2), (-1, -1), 0),
        (WeylElt(0, 1, 1), (-1, 0), 0),
    ],
)
def test_to_semidirect_examples(w, lam, sw):
    assert to_semidirect(w) == SemidirectForm(lam, sw)


def test_multiply_examples():
    w = WeylElt(3, 1, -2)
    assert multiply(IDENTITY, w) == w
    assert multiply(TAU, TAU) == WeylElt(0, 0, 2)
    assert multiply(S1, S1) == IDENTITY


def test_affine_reflections_are_involutions():
    assert S0 * S0 == IDENTITY
    assert length(S0) == length(S1) == 1
    # tau conjugates one simple reflection to the other
    assert inverse(TAU) * S1 * TAU == S0


@pytest.mark.parametrize(
    "w, n", [(WeylElt(0, 0, 5), 0), (WeylElt(1, 1, 0), 3), (WeylElt(-2, 1, 0), 3)]
)
def test_length_examples(w, n):
    assert length(w) == n


@pytest.mark.parametrize(
    "w, wb",
    [
        (WeylElt(0, 0, 7), WeylElt(0, 0, 7)),
        (WeylElt(1, 1, 0), WeylElt(-2, 1, 0)),
        (WeylElt(2, 0, 3), WeylElt(-2, 0, 3)),
    ],
)
def test_bar_examples(w, wb):
    assert bar(w) == wb


def test_admissibility_examples():
    for i in range(-3, 4):
        mu = Cocharacter(i, i)
        assert admissible_set(mu) == [WeylElt(0, 0, -2 * i)]
        assert is_admissible(WeylElt(0, 0, -2 * i), mu)
    mu = Cocharacter(0, -1)
    assert is_admissible(WeylElt(0, 1, 1), mu)
    assert not is_admissible(WeylElt(1, 0, 1), mu)
    assert admissible_set(mu) == [WeylElt(0, 0, 1), WeylElt(0, 1, 1), WeylElt(-1, 1, 1)]
    assert admissible_set(Cocharacter(1, -1)) == [
        WeylElt(0, 0, 0),
        WeylElt(0, 1, 0),
        WeylElt(-1, 1, 0),
        WeylElt(1, 0, 0),
        WeylElt(-1, 0, 0),
    ]


def test_non_dominant_rejected():
    with pytest.raises(ValueError):
        admissible_set(Cocharacter(-1, 0))
    with pytest.raises(ValueError):
        is_admissible(IDENTITY, Cocharacter(0, 2))


@pytest.mark.parametrize(
    "mu, w",
    [
        (Cocharacter(0, 0), WeylElt(0, 0, 0)),
        (Cocharacter(1, 1), WeylElt(0, 0, -2)),
        (Cocharacter(1, -1), WeylElt(-1, 0, 0)),
    ],
)
def test_translation_examples(mu, w):
    assert translation(mu) == w


def test_roundtrip_exhaustive():
    for w in iter_box(20):
        assert from_semidirect(to_semidirect(w)) == w


def test_length_classes_exhaustive():
    for s in (-3, 0, 1, 4):
        for n in range(21):
            members = [w for w in iter_box(12) if w.s == s and length(w) == n]
            assert len(members) == (1 if n == 0 else 2)
            assert sorted(members) == sorted(elements_of(n, s))


def test_bar_exhaustive():
    for w in iter_box(20):
        wb = bar(w)
        assert length(wb) == length(w) and size(wb) == size(w)
        assert bar(wb) == w
        assert (wb == w) == (length(w) == 0)
        if length(w):
            assert set(elements_of(length(w), size(w))) == {w, wb}


def test_bad_b_rejected():
    with pytest.raises(ValueError):
        WeylElt(0, 2, 0)


@given(elts, elts, elts)
def test_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(elts)
def test_inverse(x):
    assert x * inverse(x) == IDENTITY == inverse(x) * x


@given(elts, elts)
def test_size_additive(x, y):
    assert size(x * y) == size(x) + size(y)


@given(cochars, cochars)
def test_translations_compose(mu, nu):
    assert translation(mu) * translation(nu) == translation(mu + nu)


@given(cochars)
def test_translation_size_length(mu):
    t = translation(mu)
    assert size(t) == mu.size
    assert length(t) == mu.length


@given(elts)
def test_bar_is_tau_conjugation(w):
    assert TAU * bar(w) == w * TAU


@given(cochars)
def test_admissible_set_shape(mu):
    if not mu.dominant:
        mu = Cocharacter(mu.j, mu.i)
    adm = admissible_set(mu)
    assert len(adm) == 2 * mu.length + 1
    assert len(set(adm)) == len(adm)
    assert all(is_admissible(w, mu) for w in adm)
    keys = [(length(w), -w.m) for w in adm]
    assert keys == sorted(keys)
