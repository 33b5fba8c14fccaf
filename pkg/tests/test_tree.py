import itertools

import pytest

from basechange.counts import CaseParams, count_delta_sigma
from basechange.tree import (
    BALL_AROUND_EDGE,
    BALL_AROUND_VERTEX,
    FLIP_EDGE,
    FixedSetSpec,
    TreeError,
    TruncTree,
    counts_params_for,
    derive_relposition,
    fixed_edge_set,
    tally,
)
from basechange.weyl import WeylElt, bar


def test_tree_shape():
    t = TruncTree.for_spec(FixedSetSpec(BALL_AROUND_VERTEX, q=2, f=1, a=1), radius=3)
    sizes = [len(level.parent) for level in t.levels()]
    assert sizes == [3, 6, 12]
    t = TruncTree.for_spec(FixedSetSpec(FLIP_EDGE, q=3, f=2), radius=2)
    sizes = [len(level.parent) for level in t.levels()]
    assert sizes == [18, 162]


def test_adjacent_types_differ():
    t = TruncTree.for_spec(FixedSetSpec(BALL_AROUND_EDGE, q=2, f=1, a=0), radius=3)
    for e in t.iter_edges():
        v, w = t.endpoints(e)
        assert t.vertex_type(v) != t.vertex_type(w)


def test_fixed_edge_examples():
    t = lambda spec: TruncTree.for_spec(spec, radius=3)
    spec = FixedSetSpec(BALL_AROUND_VERTEX, q=3, f=1, a=0)
    assert fixed_edge_set(spec, t(spec)) == set()
    spec = FixedSetSpec(BALL_AROUND_VERTEX, q=2, f=1, a=1)
    assert len(fixed_edge_set(spec, t(spec))) == 3
    spec = FixedSetSpec(BALL_AROUND_EDGE, q=2, f=1, a=1)
    assert len(fixed_edge_set(spec, t(spec))) == 5
    spec = FixedSetSpec(FLIP_EDGE, q=2, f=1)
    assert fixed_edge_set(spec, t(spec)) == {(0, ())}


def test_fixed_set_uses_small_arity():
    # over the degree two extension the fixed subtree still branches q+1 ways
    spec = FixedSetSpec(BALL_AROUND_VERTEX, q=2, f=2, a=2)
    assert len(fixed_edge_set(spec, TruncTree.for_spec(spec, radius=3))) == 3 + 6
    spec = FixedSetSpec(BALL_AROUND_EDGE, q=3, f=2, a=2)
    assert len(fixed_edge_set(spec, TruncTree.for_spec(spec, radius=3))) == 1 + 2 * (3 + 9)


def test_radius_too_small():
    spec = FixedSetSpec(BALL_AROUND_VERTEX, q=2, f=1, a=3)
    with pytest.raises(TreeError):
        fixed_edge_set(spec, TruncTree.for_spec(spec, radius=3))


def test_relposition_examples():
    spec = FixedSetSpec(FLIP_EDGE, q=2, f=1)
    t = TruncTree.for_spec(spec, radius=4)
    assert derive_relposition((0, ()), spec, t) == (0, 0)
    # side 0 has type 0; depth two there is again type 0
    assert derive_relposition((0, (0, 1)), spec, t) == (-2, 0)
    assert derive_relposition((1, (0, 1)), spec, t) == (2, 0)

    spec = FixedSetSpec(BALL_AROUND_VERTEX, q=2, f=1, a=1, center_type=0)
    t = TruncTree.for_spec(spec, radius=4)
    assert derive_relposition((0, (2,)), spec, t) == (0, 0)
    assert derive_relposition((0, (2, 1)), spec, t) == (-1, 1)
    assert derive_relposition((0, (2, 1, 0)), spec, t) == (1, 1)


def test_uncertified_edge_rejected():
    spec = FixedSetSpec(BALL_AROUND_VERTEX, q=2, f=2, a=2)
    t = TruncTree.for_spec(spec, radius=4)
    # leaves the fixed subtree at the root, so its shell r = 4 is cut off
    with pytest.raises(TreeError):
        derive_relposition((0, (4, 0, 0, 0)), spec, t)
    assert derive_relposition((0, (0, 0, 0, 0)), spec, t) == (-2, 1)
    with pytest.raises(TreeError):
        derive_relposition((0, (0, 0, 0, 0, 0)), spec, t)


def test_flip_spot_values():
    spec = FixedSetSpec(FLIP_EDGE, q=2, f=1)
    res = tally(spec, TruncTree.for_spec(spec, radius=4))
    assert res.counts[(0, 0)] == 1
    assert [res.counts[(r, 0)] for r in (1, 2, 3)] == [2, 4, 8]
    assert [res.counts[(-r, 0)] for r in (1, 2, 3)] == [2, 4, 8]


def test_ball_around_vertex_spot_values():
    spec = FixedSetSpec(BALL_AROUND_VERTEX, q=2, f=1, a=1, center_type=0)
    res = tally(spec, TruncTree.for_spec(spec, radius=4))
    assert res.counts[(0, 0)] == 3
    assert res.counts[(-1, 1)] == 6  # a + r even
    assert res.counts.get((0, 1), 0) == 0
    assert res.counts[(1, 1)] == 12  # r = 2, a + r odd
    assert res.counts.get((-2, 1), 0) == 0


def test_twisted_short_long_split():
    spec = FixedSetSpec(BALL_AROUND_VERTEX, q=2, f=2, a=1, center_type=0)
    res = tally(spec, TruncTree.for_spec(spec, radius=3))
    assert res.counts[(0, 1)] == 2
    assert res.counts[(-1, 1)] == 12


def test_vector_and_scalar_routes_agree():
    for variant, q, f, a, c in [
        (FLIP_EDGE, 2, 2, 0, 0),
        (BALL_AROUND_EDGE, 3, 1, 1, 0),
        (BALL_AROUND_VERTEX, 2, 2, 2, 1),
    ]:
        spec = FixedSetSpec(variant, q=q, f=f, a=a, center_type=c)
        t = TruncTree.for_spec(spec, radius=4)
        res = tally(spec, t)
        manual, skipped = {}, 0
        for e in t.iter_edges():
            try:
                key = derive_relposition(e, spec, t)
            except TreeError:
                skipped += 1
                continue
            manual[key] = manual.get(key, 0) + 1
        assert manual == res.counts
        assert skipped == res.uncertified


def test_shell_completeness():
    spec = FixedSetSpec(BALL_AROUND_EDGE, q=3, f=2, a=1)
    t = TruncTree.for_spec(spec, radius=4)
    res = tally(spec, t)
    for r, total in res.shell_totals.items():
        if r == 0:
            assert total == res.counts[(0, 0)]
        else:
            assert total == res.counts.get((-r, 1), 0) + res.counts.get((r - 1, 1), 0)
    assert sum(res.counts.values()) + res.uncertified == t.num_edges()


def _agreement(spec, radius):
    res = tally(spec, TruncTree.for_spec(spec, radius=radius))
    params, use_bar = counts_params_for(spec)
    bad = []
    top = 2 * res.certified_max_r + (0 if spec.variant == FLIP_EDGE else -1)
    for n in range(top + 1):
        for m in range(-n - 1, n + 1):
            for b in (0, 1):
                if abs(2 * m + b) != n:
                    continue
                w = WeylElt(m, b, params.s)
                expect = count_delta_sigma(bar(w) if use_bar else w, params)
                got = res.counts.get((m, b), 0)
                if got != expect:
                    bad.append((w, got, expect))
    return bad


@pytest.mark.parametrize(
    "variant, q, f, a, c",
    [
        (v, q, f, a, c)
        for v, q, f, a, c in itertools.product(
            (FLIP_EDGE, BALL_AROUND_EDGE, BALL_AROUND_VERTEX), (2, 3), (1, 2), (0, 1, 2), (0, 1)
        )
        if not (v != BALL_AROUND_VERTEX and c == 1) and not (v == FLIP_EDGE and a > 0)
    ],
)
def test_oracle_matches_counts(variant, q, f, a, c):
    spec = FixedSetSpec(variant, q=q, f=f, a=a, center_type=c)
    assert _agreement(spec, radius=5) == []


def test_counts_params_mapping():
    p, use_bar = counts_params_for(FixedSetSpec(FLIP_EDGE, q=3, f=2))
    assert p.s % 2 == 1 and not use_bar
    p, _ = counts_params_for(FixedSetSpec(BALL_AROUND_EDGE, q=3, f=1, a=2))
    assert p == CaseParams(q=3, f=1, a=2, ramified=True, s=0)
    p, use_bar = counts_params_for(FixedSetSpec(BALL_AROUND_VERTEX, q=3, f=2, a=1, center_type=1))
    assert p.eigen_diff_mod4 == 2 and not use_bar
    p, use_bar = counts_params_for(FixedSetSpec(BALL_AROUND_VERTEX, q=3, f=1, a=1, center_type=1))
    assert use_bar
