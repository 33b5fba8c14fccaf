"""Closed-form edge counts ``#X^0_w(gamma)`` and ``#X^0_w(delta sigma)``.

Every formula is written once, generically in the residue cardinality ``q``,
and evaluated either at an integer ``q`` (exact :class:`~fractions.Fraction`
arithmetic, then checked to be a nonnegative integer) or at the formal
``q = u^2`` of :class:`~basechange.scalar.Scalar`.

Case matrix (``r >= 1`` indexes the length class, ``s`` is the size):

===========  ==========  ======  ===========================================
ramified     split_in_E  s       nonzero counts
===========  ==========  ======  ===========================================
yes          no          odd     ``(+-r,0,s)``
yes          no          even    ``(0,0,s)``, ``(-r,1,s)``, ``(r-1,1,s)``
no           yes         odd     ``(+-r,0,s)``
no           yes         even    ``(0,0,s)``, odd lengths; eigen_diff_mod4
no           no          any     ``(0,0,s)``, odd lengths
===========  ==========  ======  ===========================================

For the untwisted count only ``q``, ``a``, ``s`` and the ramification flag
matter.  ``d_T`` is carried for reporting; the formulas see only ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Any, Optional

from .scalar import Scalar
from .weyl import WeylElt

__all__ = [
    "CaseParams",
    "InvalidCaseParams",
    "is_prime_power",
    "count_gamma",
    "count_delta_sigma",
    "count_gamma_formal",
    "count_delta_sigma_formal",
    "long_value",
    "short_value",
]


class InvalidCaseParams(ValueError):
    pass


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


@dataclass(frozen=True)
class CaseParams:
    q: int
    f: int = 1
    a: int = 0
    ramified: bool = False
    s: int = 0
    split_in_E: bool = False
    eigen_diff_mod4: Optional[int] = None
    d_T: int = 0

    def __post_init__(self):
        problems = []
        if not is_prime_power(self.q):
            problems.append(f"q={self.q} is not a prime power")
        if self.f < 1:
            problems.append(f"f={self.f} must be >= 1")
        if self.a < 0:
            problems.append(f"a={self.a} must be >= 0")
        if self.d_T < 0:
            problems.append(f"d_T={self.d_T} must be >= 0")
        if self.ramified and self.split_in_E:
            problems.append("a ramified torus never splits over an unramified extension")
        if not self.ramified and self.split_in_E != (self.f % 2 == 0):
            # the unramified quadratic extension embeds in E exactly when f is even
            problems.append(f"unramified torus splits over E iff f is even (f={self.f})")
        needs_diff = (not self.ramified) and self.split_in_E and self.s % 2 == 0
        if needs_diff and self.eigen_diff_mod4 not in (0, 2):
            problems.append("eigen_diff_mod4 in {0, 2} is required for split, even s")
        if not needs_diff and self.eigen_diff_mod4 is not None:
            problems.append("eigen_diff_mod4 only applies to split, even s")
        if problems:
            raise InvalidCaseParams("; ".join(problems))

    def untwisted(self) -> "CaseParams":
        """Parameters of ``gamma = N(delta)`` seen over the base field."""
        return replace(self, f=1, s=self.f * self.s, split_in_E=False, eigen_diff_mod4=None)

    def label(self) -> str:
        kind = "ram" if self.ramified else ("split" if self.split_in_E else "unram")
        tail = f",e={self.eigen_diff_mod4}" if self.eigen_diff_mod4 is not None else ""
        return f"{kind}(q={self.q},f={self.f},a={self.a},s={self.s}{tail})"


# generic formulas; ``q`` is a Fraction or a formal Scalar


def _geom(q: Any, a: int) -> Any:
    """``(q^a - 1)/(q - 1)``, valid for any integer ``a``."""
    return (q**a - 1) / (q - 1)


def _zero_value(q: Any, p: CaseParams) -> Any:
    if p.ramified:
        return (2 * q ** (p.a + 1) - q - 1) / (q - 1)
    return (q + 1) * _geom(q, p.a)


def long_value(q: Any, f: int, a: int, r: int) -> Any:
    """Count at the long slot of length ``2r-1`` in the unramified twisted case."""
    return q ** (f * r) * ((1 - q ** (1 - f)) * _geom(q, a - 1) + (q + 1) * q ** (a - 1))


def short_value(q: Any, f: int, a: int, r: int) -> Any:
    return q ** (f * r) * (1 - q ** (1 - f)) * _geom(q, a)


def _ramified_pair(q: Any, f: int, a: int, r: int) -> Any:
    return q ** (f * r) * (q**a + _geom(q, a) * (1 - q ** (1 - f)))


def _count(w: WeylElt, p: CaseParams, q: Any, f: int) -> Any:
    zero = q * 0
    if w.s != p.s:
        return zero
    # the torus splits over E only for the twisted count
    split = p.split_in_E and f > 1
    flip = p.s % 2 == 1 and (p.ramified or split)
    if flip:
        if w.b == 1:
            return zero
        return q ** (f * abs(w.m))
    if w.m == 0 and w.b == 0:
        return _zero_value(q, p)
    if w.b == 0:
        return zero
    # w = (-r,1,s) or (r-1,1,s), both of length 2r-1
    first = w.m < 0
    r = -w.m if first else w.m + 1
    if p.ramified:
        return _ramified_pair(q, f, p.a, r)
    first_is_long = (p.a + r) % 2 == 0
    if split and p.eigen_diff_mod4 == 2:
        first_is_long = not first_is_long
    if first == first_is_long:
        return long_value(q, f, p.a, r)
    return short_value(q, f, p.a, r)


def _to_int(x: Fraction, what: str) -> int:
    if x.denominator != 1 or x < 0:
        raise ArithmeticError(f"{what} evaluated to {x}, not a nonnegative integer")
    return int(x)


def count_gamma(w: WeylElt, p: CaseParams) -> int:
    """Number of size-0 extended edges in relative position ``w`` to ``gamma``."""
    return _to_int(_count(w, p, Fraction(p.q), 1), f"count_gamma({w}, {p.label()})")


def count_delta_sigma(w: WeylElt, p: CaseParams) -> int:
    """Twisted analogue of :func:`count_gamma` for ``delta sigma``."""
    return _to_int(_count(w, p, Fraction(p.q), p.f), f"count_delta_sigma({w}, {p.label()})")


@lru_cache(maxsize=None)
def count_gamma_formal(w: WeylElt, p: CaseParams) -> Scalar:
    return _count(w, p, Scalar.q(), 1)


@lru_cache(maxsize=None)
def count_delta_sigma_formal(w: WeylElt, p: CaseParams) -> Scalar:
    return _count(w, p, Scalar.q(), p.f)
