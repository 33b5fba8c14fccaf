"""Finite-precision arithmetic in Q_p and its unramified extensions.

An :class:`UnramifiedField` of degree ``f`` is ``Q_p[x]/(h)`` for a monic lift
``h`` of an irreducible polynomial over ``F_p``; the class of ``x`` is the
generator ``g``.  Elements carry an absolute precision: ``x`` is known modulo
``p^prec``.  Degree one gives ``Q_p`` itself, so :data:`PadicElt` is simply
the element type over a degree-one field.

Frobenius sends ``g`` to the root of ``h`` congruent to ``g^p``, found by
Newton iteration.  Valuations are only reported with at least
``VALUATION_SLACK`` digits of headroom below the precision; otherwise a
:class:`PrecisionError` is raised rather than guessing.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "PrecisionError",
    "UnramifiedField",
    "UnramifiedElt",
    "PadicElt",
    "Mat2",
    "DEFAULT_PRECISION",
    "VALUATION_SLACK",
    "is_square_residue",
    "vp",
    "norm_map",
    "delta_fn",
    "eigenvalue_valuations",
    "standard_form",
    "is_norm_valuation",
]

DEFAULT_PRECISION = 40
VALUATION_SLACK = 3


class PrecisionError(ArithmeticError):
    pass


def vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_square_residue(d: int, p: int) -> bool:
    """Euler's criterion for a unit ``d`` modulo an odd prime ``p``."""
    if d % p == 0:
        raise ValueError(f"{d} is not a unit mod {p}")
    return pow(d % p, (p - 1) // 2, p) == 1


# polynomials over F_p, lowest degree first


def _fp_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a: Sequence[int], h: Sequence[int], p: int) -> list:
    a = [c % p for c in a]
    inv = pow(h[-1], -1, p)
    dh = len(h) - 1
    for k in range(len(a) - 1, dh - 1, -1):
        c = a[k] * inv % p
        if c:
            for j, y in enumerate(h):
                a[k - dh + j] = (a[k - dh + j] - c * y) % p
    return _fp_trim(a[:dh] if len(a) > dh else a)


def _fp_mul(a: Sequence[int], b: Sequence[int], p: int) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _fp_trim(out)


def _fp_gcd(a: list, b: list, p: int) -> list:
    a, b = _fp_trim([c % p for c in a]), _fp_trim([c % p for c in b])
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_powmod(base: list, e: int, h: Sequence[int], p: int) -> list:
    out, base = [1], _fp_mod(base, h, p)
    while e:
        if e & 1:
            out = _fp_mod(_fp_mul(out, base, p), h, p)
        base = _fp_mod(_fp_mul(base, base, p), h, p)
        e >>= 1
    return out


def _fp_irreducible(h: Sequence[int], p: int) -> bool:
    """Ben-Or: ``h`` has no factor of degree ``i`` for ``i <= deg h / 2``."""
    f = len(h) - 1
    xp = [0, 1]
    for _ in range(1, f // 2 + 1):
        xp = _fp_powmod(xp, p, h, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] -= 1
        if len(_fp_gcd(list(h), diff, p)) > 1:
            return False
    return True


def _choose_modulus(p: int, f: int) -> tuple[int, ...]:
    if f == 1:
        return (0, 1)
    if f == 2:
        # x^2 - D0 with D0 a nonresidue, preferring D0 = -1
        d0 = -1 if not is_square_residue(-1, p) else next(
            d for d in range(2, p) if not is_square_residue(d, p)
        )
        return (-d0, 0, 1)
    for tail in itertools.product(range(p), repeat=f):
        h = tail + (1,)
        if h[0] and _fp_irreducible(h, p):
            return h
    raise AssertionError("no irreducible polynomial found")


Rational = Union[int, Fraction]


class UnramifiedField:
    """``Q_p[g]/(h(g))`` with working precision ``prec``."""

    def __init__(self, p: int, f: int = 1, prec: int = DEFAULT_PRECISION, h: Sequence[int] | None = None):
        if p == 2:
            raise ValueError("residue characteristic 2 is not supported")
        if f < 1 or prec < 4:
            raise ValueError("need f >= 1 and prec >= 4")
        self.p, self.f, self.prec = p, f, prec
        self.h = tuple(h) if h is not None else _choose_modulus(p, f)
        if len(self.h) != f + 1 or self.h[-1] != 1:
            raise ValueError("modulus must be monic of degree f")
        if f > 1 and not _fp_irreducible(self.h, p):
            raise ValueError(f"{self.h} is reducible mod {p}")
        self._frob_gen = self._lift_frobenius() if f > 1 else None

    def __repr__(self):
        return f"UnramifiedField(p={self.p}, f={self.f}, prec={self.prec})"

    def __eq__(self, other):
        return isinstance(other, UnramifiedField) and (self.p, self.f, self.h) == (other.p, other.f, other.h)

    def __hash__(self):
        return hash((self.p, self.f, self.h))

    # constructors

    def __call__(self, x: Rational | "UnramifiedElt", prec: int | None = None) -> "UnramifiedElt":
        if isinstance(x, UnramifiedElt):
            return x
        if not isinstance(x, (int, Fraction)):
            raise TypeError(f"exact int or Fraction required, got {type(x).__name__}")
        prec = self.prec if prec is None else prec
        x = Fraction(x)
        if x == 0:
            return UnramifiedElt(self, prec, (0,) * self.f, prec)
        v = vp(x.numerator, self.p) - vp(x.denominator, self.p)
        num = x.numerator // self.p ** max(v, 0)
        den = x.denominator // self.p ** max(-v, 0)
        mod = self.p ** max(prec - v, 1)
        unit = num * pow(den, -1, mod) % mod
        return UnramifiedElt(self, v, (unit,) + (0,) * (self.f - 1), prec)

    def from_coeffs(self, coeffs: Sequence[Rational], prec: int | None = None) -> "UnramifiedElt":
        g = self.gen(prec)
        out = self(0, prec)
        power = self(1, prec)
        for c in coeffs:
            out = out + power * c
            power = power * g
        return out

    def gen(self, prec: int | None = None) -> "UnramifiedElt":
        prec = self.prec if prec is None else prec
        if self.f == 1:
            # the generator of Z_p[x]/(x) is 0; degree one has no extra generator
            return self(0, prec)
        return UnramifiedElt(self, 0, (0, 1) + (0,) * (self.f - 2), prec)

    def one(self) -> "UnramifiedElt":
        return self(1)

    def zero(self) -> "UnramifiedElt":
        return self(0)

    def residues(self) -> Iterable[tuple[int, ...]]:
        """Coefficient vectors of a full set of residue representatives."""
        return itertools.product(range(self.p), repeat=self.f)

    # Frobenius

    def _lift_frobenius(self) -> tuple[int, ...]:
        p, h = self.p, self.h
        root0 = _fp_powmod([0, 1], p, h, p)
        phi = UnramifiedElt(self, 0, tuple(root0 + [0] * (self.f - len(root0))), self.prec).normalized()
        dh = tuple(i * h[i] for i in range(1, len(h)))
        for _ in range(self.prec.bit_length() + 2):
            val = _poly_eval(h, phi)
            if val.is_zero():
                break
            phi = phi - val / _poly_eval(dh, phi)
        if not _poly_eval(h, phi).is_zero():
            raise PrecisionError("Frobenius lift did not converge")
        return phi.coeffs_at(0)

    def frobenius(self, x: "UnramifiedElt") -> "UnramifiedElt":
        if self.f == 1:
            return x
        if x.is_zero():
            return x
        img = UnramifiedElt(self, 0, self._frob_gen, self.prec)
        rel = x.prec - x.e
        out = self(0, rel)
        power = self(1, rel)
        for i, c in enumerate(x.c):
            if c:
                out = out + power * c
            if i + 1 < self.f:
                power = power * img
        return out * UnramifiedElt(self, x.e, (1,) + (0,) * (self.f - 1), x.prec)


def _poly_eval(coeffs: Sequence[int], x: "UnramifiedElt") -> "UnramifiedElt":
    out = x.field(0, x.prec)
    for c in reversed(coeffs):
        out = out * x + c
    return out


class UnramifiedElt:
    """``p^e * sum c_i g^i`` known modulo ``p^prec``.

    Nonzero elements are normalized so that some ``c_i`` is prime to ``p``;
    an element that vanishes at its precision has ``e == prec`` and zero
    coefficients.
    """

    __slots__ = ("field", "e", "c", "prec")

    def __init__(self, field: UnramifiedField, e: int, c: tuple[int, ...], prec: int):
        self.field, self.e, self.c, self.prec = field, e, c, prec

    def normalized(self) -> "UnramifiedElt":
        p, e, c, prec = self.field.p, self.e, list(self.c), self.prec
        if e >= prec:
            return UnramifiedElt(self.field, prec, (0,) * self.field.f, prec)
        mod = p ** (prec - e)
        c = [x % mod for x in c]
        while all(x % p == 0 for x in c):
            if not any(c) or e + 1 >= prec:
                return UnramifiedElt(self.field, prec, (0,) * self.field.f, prec)
            c = [x // p for x in c]
            e += 1
        return UnramifiedElt(self.field, e, tuple(c), prec)

    # queries

    def is_zero(self) -> bool:
        return not any(self.c)

    def valuation(self, slack: int = VALUATION_SLACK) -> int:
        if self.is_zero():
            raise PrecisionError(f"element vanishes to precision {self.prec}")
        if self.e > self.prec - slack:
            raise PrecisionError(f"valuation {self.e} too close to precision {self.prec}")
        return self.e

    def unit_part(self) -> "UnramifiedElt":
        if self.is_zero():
            raise PrecisionError("zero has no unit part")
        return UnramifiedElt(self.field, 0, self.c, self.prec - self.e)

    def coeffs_at(self, e: int) -> tuple[int, ...]:
        """Coefficients of ``p^-e * self``; requires ``self.e >= e``."""
        if self.is_zero():
            return (0,) * self.field.f
        if self.e < e:
            raise ValueError("element is not divisible by the requested power")
        s = self.field.p ** (self.e - e)
        return tuple(x * s for x in self.c)

    def integral_coeffs(self, modulus_exp: int) -> tuple[int, ...]:
        """Coefficients in ``[0, p^k)`` of an integral element reduced mod ``p^k``."""
        if modulus_exp > self.prec:
            raise PrecisionError(f"need precision {modulus_exp}, have {self.prec}")
        mod = self.field.p**modulus_exp
        return tuple(x % mod for x in self.coeffs_at(0))

    def with_prec(self, prec: int) -> "UnramifiedElt":
        return UnramifiedElt(self.field, self.e, self.c, min(prec, self.prec)).normalized()

    # arithmetic

    def _coerce(self, other) -> "UnramifiedElt":
        if isinstance(other, UnramifiedElt):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prec = min(self.prec, o.prec)
        if self.is_zero():
            return o.with_prec(prec)
        if o.is_zero():
            return self.with_prec(prec)
        e = min(self.e, o.e)
        p = self.field.p
        s1, s2 = p ** (self.e - e), p ** (o.e - e)
        c = tuple(x * s1 + y * s2 for x, y in zip(self.c, o.c))
        return UnramifiedElt(self.field, e, c, prec).normalized()

    __radd__ = __add__

    def __neg__(self):
        return UnramifiedElt(self.field, self.e, tuple(-x for x in self.c), self.prec).normalized()

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
        if self.is_zero() or o.is_zero():
            # known to vanish modulo the product of the precisions
            prec = min(self.prec + (0 if o.is_zero() else o.e), o.prec + (0 if self.is_zero() else self.e))
            if self.is_zero() and o.is_zero():
                prec = self.prec + o.prec
            return self.field(0, prec)
        prec = min(self.prec + o.e, o.prec + self.e)
        e = self.e + o.e
        f = self.field.f
        if f == 1:
            c = (self.c[0] * o.c[0],)
        else:
            prod = [0] * (2 * f - 1)
            for i, x in enumerate(self.c):
                if x:
                    for j, y in enumerate(o.c):
                        prod[i + j] += x * y
            h = self.field.h
            for k in range(2 * f - 2, f - 1, -1):
                t = prod[k]
                if t:
                    for j in range(f):
                        prod[k - f + j] -= t * h[j]
            c = tuple(prod[:f])
        return UnramifiedElt(self.field, e, c, prec).normalized()

    __rmul__ = __mul__

    def _unit_inverse(self, k: int) -> tuple[int, ...]:
        """Inverse of the unit ``sum c_i g^i`` modulo ``p^k``."""
        p, f, h = self.field.p, self.field.f, self.field.h
        if f == 1:
            return (pow(self.c[0], -1, p**k),)
        r = _fp_powmod(list(self.c), p**f - 2, h, p)
        y = UnramifiedElt(self.field, 0, tuple(r + [0] * (f - len(r))), 1)
        u = UnramifiedElt(self.field, 0, self.c, k)
        prec = 1
        while prec < k:
            prec = min(2 * prec, k)
            y = UnramifiedElt(self.field, y.e, y.c, prec)
            y = y * (2 - u * y)
        return y.coeffs_at(0)

    def inverse(self) -> "UnramifiedElt":
        if self.is_zero():
            raise ZeroDivisionError("inverse of an element vanishing at precision")
        rel = self.prec - self.e
        c = self._unit_inverse(rel)
        return UnramifiedElt(self.field, -self.e, c, rel - self.e).normalized()

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field(1, self.prec + max(0, (n - 1) * self.e) if not self.is_zero() else self.prec)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def frobenius(self) -> "UnramifiedElt":
        return self.field.frobenius(self)

    # comparison: equality at the common precision

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self - o).is_zero()

    def __hash__(self):
        raise TypeError("finite-precision elements are not hashable")

    def __repr__(self):
        if self.is_zero():
            return f"O({self.field.p}^{self.prec})"
        terms = " + ".join(f"{c}*g^{i}" if i else str(c) for i, c in enumerate(self.c) if c)
        return f"{self.field.p}^{self.e}*({terms}) + O({self.field.p}^{self.prec})"


PadicElt = UnramifiedElt


class Mat2:
    """A 2x2 matrix ``[[a, b], [c, d]]`` over an unramified field."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def scalar(cls, x: UnramifiedElt) -> "Mat2":
        z = x.field(0)
        return cls(x, z, z, x)

    @classmethod
    def identity(cls, field: UnramifiedField) -> "Mat2":
        return cls.scalar(field(1))

    @classmethod
    def from_rows(cls, field: UnramifiedField, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(field(a), field(b), field(c), field(d))

    @property
    def field(self) -> UnramifiedField:
        return self.a.field

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, o):
        if isinstance(o, Mat2):
            return Mat2(
                self.a * o.a + self.b * o.c,
                self.a * o.b + self.b * o.d,
                self.c * o.a + self.d * o.c,
                self.c * o.b + self.d * o.d,
            )
        return Mat2(self.a * o, self.b * o, self.c * o, self.d * o)

    __rmul__ = __mul__

    def det(self) -> UnramifiedElt:
        return self.a * self.d - self.b * self.c

    def trace(self) -> UnramifiedElt:
        return self.a + self.d

    def inverse(self) -> "Mat2":
        dinv = self.det().inverse()
        return Mat2(self.d * dinv, -self.b * dinv, -self.c * dinv, self.a * dinv)

    def frobenius(self) -> "Mat2":
        return Mat2(*(x.frobenius() for x in self.entries()))

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return all(x == y for x, y in zip(self.entries(), other.entries()))

    def __repr__(self):
        return f"Mat2([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


def norm_map(delta: Mat2, f: int | None = None) -> Mat2:
    """``delta * sigma(delta) * ... * sigma^{f-1}(delta)``."""
    f = delta.field.f if f is None else f
    out, cur = delta, delta
    for _ in range(f - 1):
        cur = cur.frobenius()
        out = out * cur
    return out


def delta_fn(g: Mat2) -> Fraction:
    """Exponent ``x`` with ``Delta(g) = q^-x``, from the characteristic polynomial."""
    tr, det = g.trace(), g.det()
    disc = tr * tr - 4 * det
    if disc.is_zero():
        raise ValueError("eigenvalues coincide to working precision (not regular)")
    return Fraction(disc.valuation() - det.valuation(), 2)


def eigenvalue_valuations(g: Mat2) -> tuple[Fraction, Fraction]:
    """Valuations of the two eigenvalues, smaller first, via the Newton polygon."""
    vdet = det_val = g.det().valuation()
    tr = g.trace()
    vtr = None if tr.is_zero() else tr.valuation()
    if vtr is not None and 2 * vtr < vdet:
        return (Fraction(vtr), Fraction(det_val - vtr))
    return (Fraction(vdet, 2), Fraction(vdet, 2))


def standard_form(x: UnramifiedElt, y: UnramifiedElt, D: UnramifiedElt) -> Mat2:
    """The elliptic element ``[[x, yD], [y, x]]`` of the torus attached to ``D``."""
    if y.is_zero():
        raise ValueError("y must be nonzero")
    if any(D.coeffs_at(D.e)[1:]) if not D.is_zero() else True:
        raise ValueError("D must be a nonzero element of the base field")
    v = D.valuation()
    if v not in (0, 1):
        raise ValueError(f"D must have valuation 0 or 1, got {v}")
    if v == 0 and is_square_residue(D.c[0], D.field.p):
        raise ValueError("D is a square; the torus would split")
    return Mat2(x, y * D, y, x)


def is_norm_valuation(gamma: Mat2, f: int) -> bool:
    return gamma.det().valuation() % f == 0
