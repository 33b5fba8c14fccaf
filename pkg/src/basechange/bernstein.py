"""Bernstein functions in the center of the Iwahori-Hecke algebra of GL_2.

The coefficient of ``z_mu`` at an element ``w`` depends only on whether ``w``
is ``mu``-admissible and on ``r = l(mu) - l(w)``:

    u^{-l(mu)}                                   if r = 0
    u^{-l(mu)} ((-q)^r - 1)(q - 1)/(q + 1)       if r >= 1

with ``u^2 = q``.  For the Hecke algebra over an unramified extension of degree
``f`` the residue cardinality is ``q^f``; pass ``f`` to substitute ``u -> u^f``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, NamedTuple

from .scalar import QSqrt, Scalar
from .weyl import Cocharacter, WeylElt, admissible_set, is_admissible, length

__all__ = [
    "CenterElement",
    "Regrouping",
    "bernstein_coeff",
    "evaluated_coeff",
    "bernstein_function",
    "base_change",
    "regroup",
]


@dataclass(frozen=True)
class CenterElement:
    coeffs: dict[WeylElt, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        sizes = {w.s for w in self.coeffs}
        if len(sizes) > 1:
            raise ValueError(f"mixed sizes in center element: {sorted(sizes)}")
        zeros = [w for w, c in self.coeffs.items() if c.is_zero()]
        if zeros:
            raise ValueError(f"zero coefficients stored at {zeros}")

    @property
    def size(self) -> int | None:
        for w in self.coeffs:
            return w.s
        return None

    @property
    def support(self) -> list[WeylElt]:
        return list(self.coeffs)

    def __getitem__(self, w: WeylElt) -> Scalar:
        return self.coeffs.get(w, Scalar())

    def __iter__(self) -> Iterator[WeylElt]:
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "CenterElement") -> "CenterElement":
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, Scalar()) + c
            if out[w].is_zero():
                del out[w]
        return CenterElement(out)

    def __eq__(self, other):
        if not isinstance(other, CenterElement):
            return NotImplemented
        return self.coeffs == other.coeffs


@lru_cache(maxsize=None)
def _coeff_by_gap(ell: int, r: int, f: int) -> Scalar:
    q = Scalar.q()
    lead = Scalar.u(-ell)
    if r == 0:
        return lead.subs_power(f)
    return (lead * ((-q) ** r - 1) * (q - 1) / (q + 1)).subs_power(f)


def bernstein_coeff(mu: Cocharacter, w: WeylElt, f: int = 1) -> Scalar:
    """Coefficient of ``z_mu`` at ``w``; ``f`` raises the residue field to ``q^f``."""
    if not is_admissible(w, mu):
        return Scalar()
    return _coeff_by_gap(mu.length, mu.length - length(w), f)


@lru_cache(maxsize=None)
def evaluated_coeff(ell: int, r: int, f: int, q: int) -> QSqrt:
    """Numeric value at ``q`` of the coefficient with gap ``r`` for ``l(mu) = ell``."""
    return _coeff_by_gap(ell, r, f).evaluate(q)


def bernstein_function(mu: Cocharacter, f: int = 1) -> CenterElement:
    return CenterElement({w: bernstein_coeff(mu, w, f) for w in admissible_set(mu)})


def base_change(mu: Cocharacter, f: int) -> CenterElement:
    """Image of ``z_mu`` (over the degree ``f`` extension) in the base center."""
    if f < 1:
        raise ValueError("f must be positive")
    return bernstein_function(mu.scale(f))


class Regrouping(NamedTuple):
    zero_term: CenterElement
    odd_pairs: list[CenterElement]
    even_pairs: list[CenterElement]

    def reassemble(self) -> CenterElement:
        out = self.zero_term
        for part in (*self.odd_pairs, *self.even_pairs):
            out = out + part
        return out


def regroup(z: CenterElement) -> Regrouping:
    """Split ``z`` into its length-zero term and pairs of equal odd/even length."""
    s = z.size
    if s is None:
        return Regrouping(CenterElement(), [], [])
    ell = max(length(w) for w in z)

    def part(*ws: WeylElt) -> CenterElement:
        return CenterElement({w: z[w] for w in ws if w in z.coeffs})

    zero = part(WeylElt(0, 0, s))
    odd = [part(WeylElt(-i, 1, s), WeylElt(i - 1, 1, s)) for i in range(1, (ell + 1) // 2 + 1)]
    even = [part(WeylElt(-j, 0, s), WeylElt(j, 0, s)) for j in range(1, ell // 2 + 1)]
    covered = sum(len(p) for p in (zero, *odd, *even))
    if covered != len(z):
        raise ValueError("center element is not supported on a single admissible set")
    return Regrouping(zero, odd, even)
