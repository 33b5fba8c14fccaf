"""Extended affine Weyl group of GL_2.

Elements are stored as triples ``(m, b, s)`` standing for
``t_{(-1,1)}^m * s_1^b * tau^s``.  The group law goes through the semidirect
normal form ``(lam, w)`` in ``Z^2 x| W`` where ``W = {1, s_1}`` acts on ``Z^2``
by swapping coordinates, and ``tau = t_{(0,-1)} s_1``.

Length is ``|2m + b|`` and does not see ``s``; size is ``s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

__all__ = [
    "WeylElt",
    "Cocharacter",
    "SemidirectForm",
    "IDENTITY",
    "S0",
    "S1",
    "TAU",
    "to_semidirect",
    "from_semidirect",
    "multiply",
    "inverse",
    "length",
    "size",
    "bar",
    "translation",
    "is_admissible",
    "admissible_set",
    "elements_of",
    "iter_box",
]


@dataclass(frozen=True, order=True)
class WeylElt:
    m: int
    b: int
    s: int

    def __post_init__(self):
        if self.b not in (0, 1):
            raise ValueError(f"b must be 0 or 1, got {self.b!r}")

    def __mul__(self, other: "WeylElt") -> "WeylElt":
        return multiply(self, other)

    @property
    def length(self) -> int:
        return abs(2 * self.m + self.b)

    @property
    def size(self) -> int:
        return self.s

    def __str__(self) -> str:
        return f"({self.m},{self.b},{self.s})"


@dataclass(frozen=True, order=True)
class Cocharacter:
    """A cocharacter ``mu = (i, j)`` of the diagonal torus."""

    i: int
    j: int

    @property
    def dominant(self) -> bool:
        return self.i >= self.j

    @property
    def length(self) -> int:
        return abs(self.i - self.j)

    @property
    def size(self) -> int:
        return -(self.i + self.j)

    def scale(self, f: int) -> "Cocharacter":
        return Cocharacter(f * self.i, f * self.j)

    def __add__(self, other: "Cocharacter") -> "Cocharacter":
        return Cocharacter(self.i + other.i, self.j + other.j)

    def __str__(self) -> str:
        return f"({self.i},{self.j})"


@dataclass(frozen=True)
class SemidirectForm:
    """``t_lam * w`` with ``w = 0`` for the identity and ``w = 1`` for ``s_1``."""

    lam: tuple[int, int]
    w: int

    def __mul__(self, other: "SemidirectForm") -> "SemidirectForm":
        l2 = _act(self.w, other.lam)
        return SemidirectForm(
            (self.lam[0] + l2[0], self.lam[1] + l2[1]), self.w ^ other.w
        )


IDENTITY = WeylElt(0, 0, 0)
S1 = WeylElt(0, 1, 0)
S0 = WeylElt(-1, 1, 0)
TAU = WeylElt(0, 0, 1)


def _act(w: int, lam: tuple[int, int]) -> tuple[int, int]:
    return (lam[1], lam[0]) if w else lam


def _tau_power(s: int) -> SemidirectForm:
    k, odd = divmod(s, 2)
    if odd:
        return SemidirectForm((-k, -k - 1), 1)
    return SemidirectForm((-k, -k), 0)


def to_semidirect(w: WeylElt) -> SemidirectForm:
    ts = _tau_power(w.s)
    lam = _act(w.b, ts.lam)
    return SemidirectForm((-w.m + lam[0], w.m + lam[1]), w.b ^ ts.w)


def from_semidirect(x: SemidirectForm) -> WeylElt:
    s = -(x.lam[0] + x.lam[1])
    ts = _tau_power(s)
    b = x.w ^ ts.w
    lam = _act(b, ts.lam)
    d0, d1 = x.lam[0] - lam[0], x.lam[1] - lam[1]
    # the remaining translation lies on the line (-m, m)
    assert d0 == -d1, (x, d0, d1)
    return WeylElt(d1, b, s)


def multiply(w1: WeylElt, w2: WeylElt) -> WeylElt:
    return from_semidirect(to_semidirect(w1) * to_semidirect(w2))


def inverse(w: WeylElt) -> WeylElt:
    x = to_semidirect(w)
    lam = _act(x.w, x.lam)
    return from_semidirect(SemidirectForm((-lam[0], -lam[1]), x.w))


def length(w: WeylElt) -> int:
    return abs(2 * w.m + w.b)


def size(w: WeylElt) -> int:
    return w.s


def bar(w: WeylElt) -> WeylElt:
    """Conjugate by ``tau``: the other element of the same length and size."""
    return multiply(multiply(inverse(TAU), w), TAU)


def translation(mu: Cocharacter) -> WeylElt:
    return from_semidirect(SemidirectForm((mu.i, mu.j), 0))


def elements_of(n: int, s: int) -> tuple[WeylElt, ...]:
    """The elements of length ``n`` and size ``s``, larger ``m`` first."""
    if n < 0:
        return ()
    if n == 0:
        return (WeylElt(0, 0, s),)
    r, odd = divmod(n, 2)
    if odd:
        return (WeylElt(r, 1, s), WeylElt(-r - 1, 1, s))
    return (WeylElt(r, 0, s), WeylElt(-r, 0, s))


def is_admissible(w: WeylElt, mu: Cocharacter) -> bool:
    if not mu.dominant:
        raise ValueError(f"cocharacter {mu} is not dominant")
    return w.s == mu.size and length(w) <= mu.length


def admissible_set(mu: Cocharacter) -> list[WeylElt]:
    if not mu.dominant:
        raise ValueError(f"cocharacter {mu} is not dominant")
    out: list[WeylElt] = []
    for n in range(mu.length + 1):
        out.extend(elements_of(n, mu.size))
    return out


def iter_box(bound: int) -> Iterator[WeylElt]:
    """All elements with ``|m| <= bound`` and ``|s| <= bound``."""
    for m in range(-bound, bound + 1):
        for b in (0, 1):
            for s in range(-bound, bound + 1):
                yield WeylElt(m, b, s)
