"""Building oracle for GL_2 over an unramified extension of Q_p.

Vertices of the tree are homothety classes of ``O_E``-lattices in ``E^2``.
Each class has a unique primitive representative in column Hermite normal
form

    [[p^alpha, c], [0, p^delta]],   c mod p^alpha,   min(alpha, delta, v(c)) = 0,

which is stored as a :class:`Vertex`.  Its distance from ``v0 = [O + O]`` is
``alpha + delta``.  A :class:`Lattice` is a vertex together with the
valuation of the determinant of a basis, and an :class:`ExtEdge` is a pair
``A ⊂ B`` of lattices in adjacent classes with ``vdet A = vdet B + 1``.

Relative position is read off from the tree alone: the size is the change in
``vdet``, the gallery length comes from elementary-divisor distances, and the
sign of ``m`` from which vertex of the first edge lies farther from the second.
Counts over a ball around ``v0`` are then compared with the closed formulas,
so nothing here depends on the combinatorial lemmas behind those formulas.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from .counts import CaseParams
from .padic import (
    Mat2,
    UnramifiedElt,
    UnramifiedField,
    delta_fn,
    eigenvalue_valuations,
    is_square_residue,
    norm_map,
    standard_form,
)
from .weyl import WeylElt, elements_of

__all__ = [
    "LatticeError",
    "Vertex",
    "Lattice",
    "ExtEdge",
    "Ball",
    "Building",
    "weyl_matrix",
    "LatticeTally",
    "empirical_counts",
    "FixedGeometry",
    "fixed_geometry",
    "observed_d_T",
    "Instance",
    "unramified_instance",
    "ramified_instance",
    "split_twisted_instance",
    "ramified_twisted_instance",
    "instance_grid",
    "DEFAULT_RADII",
]

# radius per (p, f) for the acceptance sweep; ball sizes 1457, 23437, 8201, 16927
DEFAULT_RADII = {(3, 1): 6, (5, 1): 6, (3, 2): 4, (5, 2): 3}


class LatticeError(ValueError):
    pass


class Vertex(NamedTuple):
    alpha: int
    delta: int
    c: tuple[int, ...]


@dataclass(frozen=True, order=True)
class Lattice:
    vdet: int
    vertex: Vertex

    def __post_init__(self):
        if (self.vdet - self.vertex.alpha - self.vertex.delta) % 2:
            raise LatticeError(f"vdet {self.vdet} has the wrong parity for {self.vertex}")


@dataclass(frozen=True)
class ExtEdge:
    """``A ⊂ B`` with ``[B : A] = q^f``; build through :meth:`Building.ext_edge`."""

    A: Lattice
    B: Lattice

    @property
    def size(self) -> int:
        return self.A.vdet

    @property
    def geometric(self) -> frozenset:
        return frozenset((self.A.vertex, self.B.vertex))


@dataclass
class Ball:
    radius: int
    dist: dict[Vertex, int]
    parent: dict[Vertex, Vertex]
    edges: list[tuple[Vertex, Vertex]]

    def _path(self, v: Vertex) -> list[Vertex]:
        out = [v]
        while v in self.parent:
            v = self.parent[v]
            out.append(v)
        return out

    def path_distance(self, v: Vertex, w: Vertex) -> int:
        """Distance through the BFS tree (the second route to ``vertex_distance``)."""
        pv, pw = self._path(v), self._path(w)
        common = set(pv) & set(pw)
        return min(i for i, x in enumerate(pv) if x in common) + min(i for i, x in enumerate(pw) if x in common)


def _vval(xs: Iterable[int], p: int) -> int | None:
    v = None
    for x in xs:
        if x:
            k = 0
            while x % p == 0:
                x //= p
                k += 1
            v = k if v is None else min(v, k)
    return v


class Building:
    """The tree of ``GL_2(E)`` for ``E`` the given unramified field."""

    def __init__(self, field: UnramifiedField):
        self.field = field
        self.p, self.f = field.p, field.f
        zero = (0,) * self.f
        self.v0 = Vertex(0, 0, zero)
        self.v1 = Vertex(0, 1, zero)
        self._residues = list(field.residues())

    # vertices

    def _primitive(self, alpha: int, delta: int, c: tuple[int, ...]) -> Vertex:
        p = self.p
        if alpha > 0 and delta > 0 and all(x % p == 0 for x in c):
            alpha, delta, c = alpha - 1, delta - 1, tuple(x // p for x in c)
        mod = p**alpha
        return Vertex(alpha, delta, tuple(x % mod for x in c))

    @staticmethod
    def vertex_type(v: Vertex) -> int:
        return (v.alpha + v.delta) % 2

    def neighbours(self, v: Vertex) -> list[Vertex]:
        alpha, delta, c = v
        P = self.p**alpha
        out = [self._primitive(alpha + 1, delta, tuple(x + P * r for x, r in zip(c, res))) for res in self._residues]
        out.append(self._primitive(alpha, delta + 1, tuple(self.p * x for x in c)))
        return out

    def neighbours_via_matrices(self, v: Vertex) -> list[Vertex]:
        F, B = self.field, self.basis(v)
        mats = [Mat2(F(self.p), F.from_coeffs(r), F(0), F(1)) for r in self._residues]
        mats.append(Mat2(F(1), F(0), F(0), F(self.p)))
        return [self.lattice_from_matrix(B * m).vertex for m in mats]

    def vertex_distance(self, v1: Vertex, v2: Vertex) -> int:
        """``|d1 - d2|`` for the elementary divisors ``p^d1, p^d2`` of ``g1^-1 g2``."""
        a1, d1, c1 = v1
        a2, d2, c2 = v2
        p = self.p
        p_d1, p_d2 = p**d1, p**d2
        vc = _vval((x * p_d1 - y * p_d2 for x, y in zip(c2, c1)), p)
        lo = min(a2 - a1, d2 - d1)
        if vc is not None:
            lo = min(lo, vc - a1 - d1)
        return (a2 + d2 - a1 - d1) - 2 * lo

    def basis(self, v: Vertex) -> Mat2:
        F = self.field
        return Mat2(F(self.p**v.alpha), F.from_coeffs(v.c), F(0), F(self.p**v.delta))

    def lattice_from_matrix(self, m: Mat2) -> Lattice:
        """Normal form of the lattice spanned by the columns of ``m``."""
        a, b, c, d = m.entries()
        if c.is_zero() and d.is_zero():
            raise LatticeError("columns do not span a lattice")
        if d.is_zero() or (not c.is_zero() and c.valuation() < d.valuation()):
            a, b, c, d = b, a, d, c
        if not c.is_zero():
            t = c / d
            a = a - t * b
        delta = d.valuation()
        b = b / d.unit_part()
        if a.is_zero():
            raise LatticeError("columns are dependent to working precision")
        alpha = a.valuation()
        k = min(alpha, delta) if b.is_zero() else min(alpha, delta, b.valuation())
        alpha, delta = alpha - k, delta - k
        if b.is_zero() or alpha == 0:
            cs = (0,) * self.f
        else:
            cs = (b * self.field(Fraction(self.p) ** -k)).integral_coeffs(alpha)
        return Lattice(alpha + delta + 2 * k, Vertex(alpha, delta, cs))

    def act_lattice(self, g: Mat2, lat: Lattice, twisted: bool = False) -> Lattice:
        basis = self.basis(lat.vertex)
        if twisted:
            basis = basis.frobenius()
        img = self.lattice_from_matrix(g * basis)
        v = lat.vertex
        return Lattice(img.vdet + lat.vdet - v.alpha - v.delta, img.vertex)

    # extended edges

    def ext_edge(self, A: Lattice, B: Lattice) -> ExtEdge:
        if A.vdet != B.vdet + 1 or self.vertex_distance(A.vertex, B.vertex) != 1:
            raise LatticeError(f"{A} and {B} do not form an extended edge")
        return ExtEdge(A, B)

    def edge_at(self, v: Vertex, w: Vertex, size: int) -> ExtEdge:
        """The extended edge of the given size over the geometric edge ``{v, w}``."""
        if self.vertex_type(v) != size % 2:
            v, w = w, v
        return self.ext_edge(Lattice(size, v), Lattice(size - 1, w))

    def base_edge(self) -> ExtEdge:
        return self.edge_at(self.v0, self.v1, 0)

    def act(self, g: Mat2, e: ExtEdge, twisted: bool = False) -> ExtEdge:
        return ExtEdge(self.act_lattice(g, e.A, twisted), self.act_lattice(g, e.B, twisted))

    def gallery_length(self, e1: ExtEdge, e2: ExtEdge) -> int:
        if e1.geometric == e2.geometric:
            return 0
        return 1 + min(self.vertex_distance(x, y) for x in e1.geometric for y in e2.geometric)

    def inv(self, e1: ExtEdge, e2: ExtEdge) -> WeylElt:
        s = e2.size - e1.size
        if e1.geometric == e2.geometric:
            return WeylElt(0, 0, s)
        ends = (e2.A.vertex, e2.B.vertex)
        dA = min(self.vertex_distance(e1.A.vertex, y) for y in ends)
        dB = min(self.vertex_distance(e1.B.vertex, y) for y in ends)
        assert dA != dB, "tree distances to an edge differ at the two ends"
        ell = 1 + min(dA, dB)
        b = ell % 2
        # the far vertex has relative type 0 exactly when it carries A
        m = (-ell - b) // 2 if dA > dB else (ell - b) // 2
        return WeylElt(m, b, s)

    # enumeration

    def ball(self, radius: int) -> Ball:
        dist = {self.v0: 0}
        parent: dict[Vertex, Vertex] = {}
        edges: list[tuple[Vertex, Vertex]] = []
        frontier = [self.v0]
        for d in range(1, radius + 1):
            nxt = []
            for v in frontier:
                for w in self.neighbours(v):
                    if w.alpha + w.delta == d:
                        dist[w] = d
                        parent[w] = v
                        edges.append((w, v))
                        nxt.append(w)
            frontier = nxt
        return Ball(radius, dist, parent, edges)


def weyl_matrix(field: UnramifiedField, w: WeylElt) -> Mat2:
    """Matrix representative ``t_{(-1,1)}^m s_1^b tau^s``."""
    F, p = field, field.p
    t = Mat2(F(Fraction(p) ** w.m), F(0), F(0), F(Fraction(p) ** -w.m))
    s1 = Mat2(F(0), F(-1), F(1), F(0)) if w.b else Mat2.identity(F)
    tau = Mat2(F(0), F(1), F(p), F(0))
    if w.s < 0:
        tau = tau.inverse()
    out = t * s1
    for _ in range(abs(w.s)):
        out = out * tau
    return out


@dataclass
class LatticeTally:
    radius: int
    shift: int
    counts: dict[int, Counter]
    fixed_vertices: list[Vertex]
    flipped_edges: list[tuple[Vertex, Vertex]]
    rho: int | None
    n_edges: int

    @property
    def complete(self) -> bool:
        """The fixed set (or flipped edge) lies strictly inside the ball."""
        return self.rho is not None and self.rho < self.radius

    @property
    def certified_max_length(self) -> int:
        # an edge at gallery length n has its far vertex within rho + (n+1)//2 of v0
        if not self.complete:
            return -1
        n = 0
        while self.rho + (n + 2) // 2 <= self.radius:
            n += 1
        return n

    def certified_elements(self, size: int = 0) -> list[WeylElt]:
        del size  # both sizes share the same shift
        return [w for n in range(self.certified_max_length + 1) for w in elements_of(n, self.shift)]


def empirical_counts(building: Building, g: Mat2, twisted: bool, radius: int) -> LatticeTally:
    """Tally ``inv(e, alpha e)`` over every edge of the ball, for sizes 0 and 1.

    ``alpha`` is ``g`` or ``g . sigma`` when ``twisted``.
    """
    ball = building.ball(radius)
    image = {v: building.act_lattice(g, Lattice(v.alpha + v.delta, v), twisted) for v in ball.dist}
    shift = image[building.v0].vdet
    fixed = sorted(v for v, im in image.items() if im.vertex == v)
    flipped = sorted(
        (v, w) for v, w in ball.edges if image[v].vertex == w and image[w].vertex == v
    )
    if fixed:
        rho = max(ball.dist[v] for v in fixed)
    elif flipped:
        rho = max(ball.dist[v] for e in flipped for v in e)
    else:
        rho = None

    def img(lat: Lattice) -> Lattice:
        im = image[lat.vertex]
        v = lat.vertex
        return Lattice(im.vdet + lat.vdet - v.alpha - v.delta, im.vertex)

    counts = {0: Counter(), 1: Counter()}
    for v, w in ball.edges:
        for n in (0, 1):
            e = building.edge_at(v, w, n)
            counts[n][building.inv(e, ExtEdge(img(e.A), img(e.B)))] += 1
    return LatticeTally(radius, shift, counts, fixed, flipped, rho, len(ball.edges))


@dataclass
class FixedGeometry:
    kind: str  # "ball-vertex", "ball-edge", "flip" or "irregular"
    centre: tuple[Vertex, ...]
    radius: int
    n_fixed_edges: int
    consistent: bool
    notes: list[str] = field(default_factory=list)


def _ball_edge_count(q: int, a: int, centre_edge: bool) -> int:
    if centre_edge:
        return 1 + 2 * (q ** (a + 1) - q) // (q - 1)
    return (q + 1) * (q**a - 1) // (q - 1)


def fixed_geometry(building: Building, tally: LatticeTally) -> FixedGeometry:
    """Recognize the fixed set as a ball in a ``(q+1)``-regular subtree."""
    q = building.p
    if not tally.fixed_vertices:
        if len(tally.flipped_edges) == 1:
            return FixedGeometry("flip", tally.flipped_edges[0], 0, 0, tally.complete)
        return FixedGeometry("irregular", (), 0, 0, False, ["no fixed vertex and no unique flipped edge"])
    fixed = set(tally.fixed_vertices)
    adj = {v: [w for w in building.neighbours(v) if w in fixed] for v in fixed}
    n_edges = sum(len(x) for x in adj.values()) // 2
    notes = []
    # connected and acyclic
    seen, stack = {tally.fixed_vertices[0]}, [tally.fixed_vertices[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if seen != fixed or n_edges != len(fixed) - 1:
        return FixedGeometry("irregular", (), 0, n_edges, False, ["fixed set is not a subtree"])
    # strip leaves down to the centre
    alive, radius = set(fixed), 0
    while len(alive) > 2:
        leaves = {v for v in alive if sum(w in alive for w in adj[v]) <= 1}
        alive -= leaves
        radius += 1
    centre = tuple(sorted(alive))
    centre_edge = len(centre) == 2
    kind = "ball-edge" if centre_edge else "ball-vertex"
    ok = tally.complete
    for v in fixed:
        d = min(building.vertex_distance(v, c) for c in centre)
        deg = len(adj[v])
        want = q + 1 if d < radius else (1 if len(fixed) > 1 else 0)
        if d > radius or deg != want:
            ok = False
            notes.append(f"{v}: distance {d}, fixed degree {deg}, expected {want}")
    if n_edges != _ball_edge_count(q, radius, centre_edge):
        ok = False
        notes.append(f"{n_edges} fixed edges, expected {_ball_edge_count(q, radius, centre_edge)}")
    return FixedGeometry(kind, centre, radius, n_edges, ok, notes)


# instances


@dataclass
class Instance:
    name: str
    field: UnramifiedField
    g: Mat2
    twisted: bool
    params: CaseParams
    expected_kind: str
    discriminant_exponent: Fraction  # x with Delta(gamma) = q^-x

    @property
    def gamma(self) -> Mat2:
        return norm_map(self.g, self.field.f) if self.twisted else self.g


def observed_d_T(inst: Instance, geo: FixedGeometry) -> int | None:
    """``d_T`` implied by the observed fixed radius (0 in the unramified case)."""
    if geo.kind == "flip":
        return None
    if not inst.params.ramified:
        return int(inst.discriminant_exponent) - geo.radius
    return int(2 * inst.discriminant_exponent - 1 - 2 * geo.radius)


def _nonresidue(p: int) -> int:
    return -1 if not is_square_residue(-1, p) else next(d for d in range(2, p) if not is_square_residue(d, p))


def _instance(name: str, field: UnramifiedField, g: Mat2, twisted: bool) -> Instance:
    """Read every case parameter off the matrices."""
    f = field.f if twisted else 1
    s = g.det().valuation()
    gamma = norm_map(g, f) if twisted else g
    x = delta_fn(gamma)
    disc = gamma.trace() * gamma.trace() - 4 * gamma.det()
    ramified = disc.valuation() % 2 == 1
    split = not ramified and f % 2 == 0
    eigen = None
    if split and s % 2 == 0:
        v1, v2 = eigenvalue_valuations(g)
        eigen = int(v2 - v1) % 4
    if ramified:
        a = int(x - Fraction(1, 2)) if s % 2 == 0 else 0
    else:
        a = int(x)
    params = CaseParams(q=field.p, f=f, a=a, ramified=ramified, s=s, split_in_E=split, eigen_diff_mod4=eigen)
    flip = s % 2 == 1 and (ramified or split)
    kind = "flip" if flip else ("ball-edge" if ramified else "ball-vertex")
    return Instance(name, field, g, twisted, params, kind, x)


def _scale(g: Mat2, k: int) -> Mat2:
    return g * g.field(Fraction(g.field.p) ** k) if k else g


def unramified_instance(p: int, a: int, s: int = 0, prec: int = 40) -> Instance:
    if s % 2:
        raise ValueError("an unramified elliptic element has even determinant valuation")
    F = UnramifiedField(p, 1, prec)
    D = F(_nonresidue(p))
    g = standard_form(F(1), F(p**a), D) if a else standard_form(F(0), F(1), D)
    return _instance(f"unram p={p} a={a} s={s}", F, _scale(g, s // 2), False)


def ramified_instance(p: int, a: int, s: int = 0, prec: int = 40) -> Instance:
    F = UnramifiedField(p, 1, prec)
    if s % 2:
        if a:
            raise ValueError("odd size fixes no vertex; a must be 0")
        g = standard_form(F(p), F(1), F(p))
        return _instance(f"ram p={p} s={s}", F, _scale(g, (s - 1) // 2), False)
    g = standard_form(F(1), F(p**a), F(p))
    return _instance(f"ram p={p} a={a} s={s}", F, _scale(g, s // 2), False)


def split_twisted_instance(p: int, a: int, m: int, n: int, prec: int = 40) -> Instance:
    """``delta`` in a torus split by ``E`` with eigenvalues ``p^m (1 + p^a g)`` and ``p^n``."""
    E = UnramifiedField(p, 2, prec)
    g = E.gen()
    D0 = E(-E.h[0])
    lam1 = (1 + g * p**a) * E(Fraction(p) ** m)
    lam2 = E(Fraction(p) ** n)
    x, y = (lam1 + lam2) / 2, (lam1 - lam2) / (g * 2)
    return _instance(f"split p={p} a={a} (m,n)=({m},{n})", E, standard_form(x, y, D0), True)


def ramified_twisted_instance(p: int, a: int, s: int = 0, prec: int = 40) -> Instance:
    E = UnramifiedField(p, 2, prec)
    g = E.gen()
    if s % 2:
        if a:
            raise ValueError("odd size fixes no vertex; a must be 0")
        delta = standard_form((1 + g) * p, E(1), E(p))
        return _instance(f"ram-tw p={p} s={s}", E, _scale(delta, (s - 1) // 2), True)
    delta = standard_form(E(1), (1 + g) * p**a, E(p))
    return _instance(f"ram-tw p={p} a={a} s={s}", E, _scale(delta, s // 2), True)


def instance_grid(p: int, f: int, prec: int = 40) -> list[Instance]:
    """Instances for the acceptance sweep; each keeps its fixed set inside the default radius."""
    R = DEFAULT_RADII.get((p, f), 3)
    out: list[Instance] = []
    if f == 1:
        out += [unramified_instance(p, a, prec=prec) for a in range(3) if a < R]
        out.append(unramified_instance(p, 1, s=2, prec=prec))
        out += [ramified_instance(p, a, prec=prec) for a in range(3) if a + 1 < R]
        out.append(ramified_instance(p, 1, s=2, prec=prec))
        out += [ramified_instance(p, 0, s=1, prec=prec), ramified_instance(p, 0, s=-1, prec=prec)]
        return out
    for a in range(3):
        for m, n in ((0, 0), (1, -1)):
            if a + abs(m - n) // 2 < R:
                out.append(split_twisted_instance(p, a, m, n, prec=prec))
        if a + 1 < R:
            out.append(ramified_twisted_instance(p, a, prec=prec))
    out.append(split_twisted_instance(p, 0, 1, 0, prec=prec))
    out.append(ramified_twisted_instance(p, 0, s=1, prec=prec))
    return out
