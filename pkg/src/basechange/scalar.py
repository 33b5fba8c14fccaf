"""Exact scalars: the field Q(u) with u a formal square root of q.

A :class:`Scalar` is a reduced fraction of polynomials in ``u`` with rational
coefficients and a monic denominator.  Evaluating at a concrete prime power
``q`` lands in ``Q[sqrt q]``, represented by :class:`QSqrt` as a pair of
rationals ``a + b*sqrt(q)``.  No floating point is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Union

__all__ = ["Scalar", "QSqrt", "as_scalar"]

Poly = tuple  # tuple[Fraction, ...], lowest degree first, no trailing zeros
Number = Union[int, Fraction]


def _trim(c: list) -> Poly:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _pneg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def _pscale(a: Poly, c: Fraction) -> Poly:
    if c == 0:
        return ()
    return tuple(x * c for x in a)


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _pdivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(rem) <= db:
        return (), tuple(rem)
    quo = [Fraction(0)] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k] / lead
        if c == 0:
            continue
        quo[k - db] = c
        for j, y in enumerate(b):
            rem[k - db + j] -= c * y
    return _trim(quo), _trim(rem[:db])


def _monic(a: Poly) -> Poly:
    lead = a[-1]
    return a if lead == 1 else tuple(c / lead for c in a)


def _pgcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _monic(a) if a else (Fraction(1),)


def _is_monomial(a: Poly) -> bool:
    return a[-1] == 1 and not any(a[:-1])


def _low_order(a: Poly) -> int:
    for i, c in enumerate(a):
        if c != 0:
            return i
    return 0


class Scalar:
    """An element of ``Q(u)``, ``u**2 = q``, in lowest terms."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=(), den=(1,), _reduced: bool = False):
        n = _trim([c if type(c) is Fraction else Fraction(c) for c in num])
        d = _trim([c if type(c) is Fraction else Fraction(c) for c in den])
        if not d:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            n, d = self._reduce(n, d)
        self.num: Poly = n
        self.den: Poly = d
        self._hash = None

    @staticmethod
    def _reduce(n: Poly, d: Poly) -> tuple[Poly, Poly]:
        if not n:
            return (), (Fraction(1),)
        # strip common powers of u cheaply before the general gcd
        k = min(_low_order(n), _low_order(d))
        if k:
            n, d = n[k:], d[k:]
        # after stripping, a monomial denominator is already coprime to n
        if len(d) > 1 and any(d[:-1]):
            g = _pgcd(n, d)
            if len(g) > 1:
                n = _pdivmod(n, g)[0]
                d = _pdivmod(d, g)[0]
        lead = d[-1]
        if lead != 1:
            n = _pscale(n, 1 / lead)
            d = _pscale(d, 1 / lead)
        return n, d

    # constructors

    @classmethod
    def u(cls, k: int = 1) -> "Scalar":
        """The monomial ``u**k`` for any integer ``k``."""
        if k >= 0:
            return cls((0,) * k + (1,), _reduced=True)
        return cls((1,), (0,) * (-k) + (1,), _reduced=True)

    @classmethod
    def q(cls, k: int = 1) -> "Scalar":
        return cls.u(2 * k)

    @classmethod
    def const(cls, c: Number) -> "Scalar":
        return cls((c,), _reduced=True)

    # arithmetic

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return Scalar(_padd(self.num, o.num), self.den)
        if _is_monomial(self.den) and _is_monomial(o.den):
            # Laurent polynomials: shift to the common power of u
            k1, k2 = len(self.den) - 1, len(o.den) - 1
            k = max(k1, k2)
            n = _padd((0,) * (k - k1) + self.num, (0,) * (k - k2) + o.num)
            return Scalar(n, (0,) * k + (1,))
        n = _padd(_pmul(self.num, o.den), _pmul(o.num, self.den))
        return Scalar(n, _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(_pneg(self.num), self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return Scalar(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        if len(base.num) - _low_order(base.num) == 1 and len(base.den) == 1:
            # monomial fast path
            j = _low_order(base.num)
            return Scalar((0,) * (j * k) + (base.num[j] ** k,), _reduced=True)
        out = Scalar.const(1)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    # substitution and evaluation

    def subs_power(self, f: int) -> "Scalar":
        """Substitute ``u -> u**f`` (so ``q -> q**f``)."""
        if f == 1:
            return self

        def spread(p: Poly) -> Poly:
            out = [Fraction(0)] * (f * (len(p) - 1) + 1) if p else []
            for i, c in enumerate(p):
                out[f * i] = c
            return tuple(out)

        return Scalar(spread(self.num), spread(self.den))

    def evaluate(self, q: int) -> "QSqrt":
        n = QSqrt.from_poly(self.num, q)
        d = QSqrt.from_poly(self.den, q)
        return n / d

    # display

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        n = _poly_str(self.num)
        if self.den == (1,):
            return n
        return f"({n})/({_poly_str(self.den)})"


def _poly_str(p: Poly) -> str:
    if not p:
        return "0"
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        mono = "" if k == 0 else ("u" if k == 1 else f"u^{k}")
        if mono and abs(c) == 1:
            coef = "-" if c < 0 else "+"
            terms.append(coef + mono)
        else:
            sign = "-" if c < 0 else "+"
            body = str(abs(c))
            terms.append(sign + (body + "*" + mono if mono else body))
    s = "".join(terms)
    return s[1:] if s.startswith("+") else s


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    return Scalar.const(x)


class QSqrt:
    """Exact element ``a + b*sqrt(q)`` of ``Q[sqrt q]``.

    When ``q`` is a perfect square the radical part is folded into ``a``.
    """

    __slots__ = ("a", "b", "q")

    def __init__(self, a: Number, b: Number, q: int):
        a, b = Fraction(a), Fraction(b)
        r = isqrt(q)
        if r * r == q:
            a, b = a + b * r, Fraction(0)
        self.a, self.b, self.q = a, b, q

    @classmethod
    def from_poly(cls, p: Poly, q: int) -> "QSqrt":
        a = b = Fraction(0)
        for k, c in enumerate(p):
            if k % 2:
                b += c * q ** (k // 2)
            else:
                a += c * q ** (k // 2)
        return cls(a, b, q)

    def _check(self, other: "QSqrt"):
        if other.q != self.q:
            raise ValueError(f"mixing sqrt({self.q}) and sqrt({other.q})")

    def _coerce(self, other):
        if isinstance(other, QSqrt):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return QSqrt(other, 0, self.q)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt(self.a + o.a, self.b + o.b, self.q)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt(-self.a, -self.b, self.q)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt(self.a - o.a, self.b - o.b, self.q)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt(
            self.a * o.a + self.b * o.b * self.q,
            self.a * o.b + self.b * o.a,
            self.q,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        norm = o.a * o.a - o.b * o.b * self.q
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q[sqrt q]")
        conj = QSqrt(o.a / norm, -o.b / norm, self.q)
        return self * conj

    def __rtruediv__(self, other):
        return QSqrt(other, 0, self.q) / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.q))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __repr__(self):
        return f"QSqrt({self.a}, {self.b}, q={self.q})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        rad = f"{self.b}*sqrt({self.q})" if self.b != 1 else f"sqrt({self.q})"
        if self.a == 0:
            return rad
        sign = "+" if self.b > 0 else "-"
        rad = rad if self.b > 0 else rad.lstrip("-")
        return f"{self.a}{sign}{rad}"
