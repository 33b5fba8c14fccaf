"""Combinatorial oracle on a truncated regular tree.

The tree has ``q^f + 1`` edges at every vertex.  An automorphism ``alpha`` is
described only through its fixed-point geometry (a :class:`FixedSetSpec`):

* ``FLIP_EDGE``: one edge is stabilized with its ends swapped, nothing is fixed.
* ``BALL_AROUND_EDGE``: the fixed edges form the ball of radius ``a`` around the
  root edge inside a ``q+1``-regular subtree.
* ``BALL_AROUND_VERTEX``: the same around a root vertex of a given type.

From that geometry alone the gallery length ``l(e, alpha e)`` and the sign
rule on the far vertex of ``e`` determine the relative position ``(m, b)`` of
every edge.  Tallying over the tree checks the series arithmetic behind the
closed counts; the geometry itself is checked separately by the lattice oracle.

Vertices are root-anchored paths ``(side, path)``: ``side`` selects the root
vertex (only ``0`` when the tree is vertex-centred) and ``path`` lists child
indices.  An edge is named by its deeper endpoint; ``(0, ())`` is the root edge
of an edge-centred tree.  Child indices below ``q`` (``q + 1`` at the root of a
vertex-centred tree) stay in the ``q+1``-regular subtree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .counts import CaseParams

__all__ = [
    "FLIP_EDGE",
    "BALL_AROUND_EDGE",
    "BALL_AROUND_VERTEX",
    "VARIANTS",
    "TreeError",
    "FixedSetSpec",
    "TruncTree",
    "Level",
    "TallyResult",
    "fixed_edge_set",
    "derive_relposition",
    "certified_max_r",
    "tally",
    "counts_params_for",
]

FLIP_EDGE = "flip-edge"
BALL_AROUND_EDGE = "ball-edge"
BALL_AROUND_VERTEX = "ball-vertex"
VARIANTS = (FLIP_EDGE, BALL_AROUND_EDGE, BALL_AROUND_VERTEX)

Edge = tuple[int, tuple[int, ...]]
Vertex = tuple[int, tuple[int, ...]]


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class FixedSetSpec:
    variant: str
    q: int
    f: int = 1
    a: int = 0
    center_type: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise TreeError(f"unknown variant {self.variant!r}")
        if self.a < 0 or self.center_type not in (0, 1) or self.f < 1 or self.q < 2:
            raise TreeError(f"bad fixed-set parameters {self}")
        if self.variant == FLIP_EDGE and self.a:
            raise TreeError("a flipped edge has no fixed ball")
        if self.variant != BALL_AROUND_VERTEX and self.center_type:
            raise TreeError("center_type only applies to a ball around a vertex")


class Level(NamedTuple):
    parent: np.ndarray
    index: np.ndarray
    side: np.ndarray


@dataclass(frozen=True)
class TruncTree:
    q: int
    f: int
    radius: int
    edge_centred: bool
    root_type: int = 0

    @classmethod
    def for_spec(cls, spec: FixedSetSpec, radius: int) -> "TruncTree":
        return cls(spec.q, spec.f, radius, spec.variant != BALL_AROUND_VERTEX, spec.center_type)

    @property
    def arity(self) -> int:
        return self.q**self.f + 1

    def n_children(self, depth: int) -> int:
        """Children of a vertex at ``depth``."""
        if depth == 0 and not self.edge_centred:
            return self.arity
        return self.arity - 1

    def sub_bound(self, depth: int) -> int:
        """Children of a ``depth`` vertex with index below this stay in the subtree."""
        if depth == 0 and not self.edge_centred:
            return self.q + 1
        return self.q

    @property
    def n_roots(self) -> int:
        return 2 if self.edge_centred else 1

    def base_type(self, side: int) -> int:
        return side if self.edge_centred else self.root_type

    def vertex_type(self, v: Vertex) -> int:
        side, path = v
        return (self.base_type(side) + len(path)) % 2

    def check_edge(self, e: Edge) -> None:
        side, path = e
        if not 0 <= side < self.n_roots:
            raise TreeError(f"no side {side}")
        if not path and not self.edge_centred:
            raise TreeError("a vertex-centred tree has no root edge")
        if len(path) > self.radius:
            raise TreeError(f"edge {e} lies outside radius {self.radius}")
        for k, i in enumerate(path):
            if not 0 <= i < self.n_children(k):
                raise TreeError(f"edge {e}: no child {i} at depth {k}")

    def endpoints(self, e: Edge) -> tuple[Vertex, Vertex]:
        side, path = e
        if not path:
            return (0, ()), (1, ())
        return (side, path[:-1]), (side, path)

    @staticmethod
    def edge_depth(e: Edge) -> int:
        return len(e[1])

    def iter_edges(self) -> Iterator[Edge]:
        if self.edge_centred:
            yield (0, ())
        for side in range(self.n_roots):
            for k in range(1, self.radius + 1):
                ranges = [range(self.n_children(d)) for d in range(k)]
                for path in itertools.product(*ranges):
                    yield (side, path)

    def num_edges(self) -> int:
        total = 1 if self.edge_centred else 0
        width = self.n_roots
        for k in range(self.radius):
            width *= self.n_children(k)
            total += width
        return total

    def levels(self) -> Iterator[Level]:
        """Vertices at depth 1, 2, ..., radius, as arrays indexed per level."""
        side = np.arange(self.n_roots, dtype=np.int64)
        for k in range(self.radius):
            nch = self.n_children(k)
            parent = np.repeat(np.arange(len(side), dtype=np.int64), nch)
            index = np.tile(np.arange(nch, dtype=np.int64), len(side))
            side = side[parent]
            yield Level(parent, index, side)


def certified_max_r(spec: FixedSetSpec, tree: TruncTree) -> int:
    """Largest shell ``r`` every edge of which lies inside the truncation."""
    return tree.radius if spec.variant == FLIP_EDGE else tree.radius - spec.a


def _require_radius(spec: FixedSetSpec, tree: TruncTree) -> None:
    if spec.a + 1 > tree.radius:
        raise TreeError(f"radius {tree.radius} too small for a={spec.a}")
    if (spec.q, spec.f) != (tree.q, tree.f) or tree.edge_centred != (spec.variant != BALL_AROUND_VERTEX):
        raise TreeError("tree does not match the fixed-set spec")


def _fixed_prefix(path: tuple[int, ...], spec: FixedSetSpec, tree: TruncTree) -> tuple[int, bool]:
    """Depth of the deepest fixed vertex on ``path`` and whether the endpoint is fixed."""
    in_sub, deepest = True, 0
    for k, i in enumerate(path):
        in_sub = in_sub and i < tree.sub_bound(k)
        if in_sub and k + 1 <= spec.a:
            deepest = k + 1
    return deepest, deepest == len(path)


def fixed_edge_set(spec: FixedSetSpec, tree: TruncTree) -> set[Edge]:
    _require_radius(spec, tree)
    if spec.variant == FLIP_EDGE:
        return {(0, ())}
    out: set[Edge] = set()
    if spec.variant == BALL_AROUND_EDGE:
        out.add((0, ()))
    for side in range(tree.n_roots):
        for k in range(1, spec.a + 1):
            ranges = [range(tree.sub_bound(d)) for d in range(k)]
            out.update((side, path) for path in itertools.product(*ranges))
    return out


def derive_relposition(e: Edge, spec: FixedSetSpec, tree: TruncTree) -> tuple[int, int]:
    """Relative position ``(m, b)`` of ``e`` and ``alpha e``."""
    _require_radius(spec, tree)
    tree.check_edge(e)
    side, path = e
    far = tree.vertex_type((side, path))
    if spec.variant == FLIP_EDGE:
        r = len(path)
        if r == 0:
            return (0, 0)
        return (-r if far == 0 else r, 0)
    if not path:
        return (0, 0)
    deepest, fixed = _fixed_prefix(path, spec, tree)
    if fixed:
        return (0, 0)
    r = len(path) - deepest
    if r > certified_max_r(spec, tree):
        raise TreeError(f"edge {e} is in shell r={r}, beyond the certified radius")
    # gallery length 2r - 1, so b = 1 and m is -r or r - 1
    return (-r if far == 0 else r - 1, 1)


@dataclass
class TallyResult:
    counts: dict[tuple[int, int], int]
    certified_max_r: int
    shell_totals: dict[int, int] = field(default_factory=dict)
    uncertified: int = 0


def _add(counts: dict, keys: np.ndarray, b: int) -> None:
    vals, freq = np.unique(keys, return_counts=True)
    for m, c in zip(vals.tolist(), freq.tolist()):
        counts[(m, b)] = counts.get((m, b), 0) + c


def tally(spec: FixedSetSpec, tree: TruncTree) -> TallyResult:
    """Exhaustive tally of relative positions over every certified edge."""
    _require_radius(spec, tree)
    maxr = certified_max_r(spec, tree)
    res = TallyResult({}, maxr)
    flip = spec.variant == FLIP_EDGE
    if tree.edge_centred:
        res.counts[(0, 0)] = 1
        res.shell_totals[0] = 1

    in_sub = np.ones(tree.n_roots, dtype=bool)
    deepest = np.zeros(tree.n_roots, dtype=np.int64)
    for k, lvl in enumerate(tree.levels(), start=1):
        in_sub = in_sub[lvl.parent] & (lvl.index < tree.sub_bound(k - 1))
        far = (np.where(lvl.side == 1, 1, 0) if tree.edge_centred else tree.root_type) + k
        far = np.asarray(far) % 2
        if flip:
            _add(res.counts, np.where(far == 0, -k, k), 0)
            res.shell_totals[k] = len(lvl.parent)
            continue
        fixed = in_sub & (k <= spec.a)
        deepest = np.where(fixed, k, deepest[lvl.parent])
        if fixed.any():
            n = int(fixed.sum())
            res.counts[(0, 0)] = res.counts.get((0, 0), 0) + n
            res.shell_totals[0] = res.shell_totals.get(0, 0) + n
        r = k - deepest
        ok = (~fixed) & (r <= maxr)
        res.uncertified += int(((~fixed) & (r > maxr)).sum())
        r_ok, far_ok = r[ok], np.broadcast_to(far, r.shape)[ok]
        _add(res.counts, np.where(far_ok == 0, -r_ok, r_ok - 1), 1)
        shells, freq = np.unique(r_ok, return_counts=True)
        for s, c in zip(shells.tolist(), freq.tolist()):
            res.shell_totals[s] = res.shell_totals.get(s, 0) + c
    return res


def counts_params_for(spec: FixedSetSpec) -> tuple[CaseParams, bool]:
    """Closed-count parameters realized by ``spec``.

    Returns the parameters and whether the tally at ``w`` should be compared
    with the closed count at ``bar(w)`` (a type-1 centre over the base field).
    """
    q, f, a = spec.q, spec.f, spec.a
    if spec.variant == FLIP_EDGE:
        if f % 2 == 0:
            return CaseParams(q=q, f=f, s=1, split_in_E=True), False
        return CaseParams(q=q, f=f, ramified=True, s=1), False
    if spec.variant == BALL_AROUND_EDGE:
        return CaseParams(q=q, f=f, a=a, ramified=True, s=0), False
    if f % 2 == 0:
        e = 2 * spec.center_type
        return CaseParams(q=q, f=f, a=a, s=0, split_in_E=True, eigen_diff_mod4=e), False
    return CaseParams(q=q, f=f, a=a, s=0), spec.center_type == 1
