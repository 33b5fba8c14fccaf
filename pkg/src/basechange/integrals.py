"""Orbital and twisted orbital integrals of Bernstein functions.

With the Iwahori subgroup and the compact torus both given measure one, an
integral of ``z_mu`` reduces to a finite sum over the admissible set:

    sum_w z_mu(w) * M(w)

where ``M(w)`` is the edge count at ``w`` (ramified torus) or the sum of the
counts at ``w`` and ``bar(w)`` (unramified torus).  Each integral is available
in two independent forms, the summation and the closed expression, and in two
arithmetics: evaluated at the numeric ``q`` in ``Q[sqrt q]`` (:class:`QSqrt`),
or formally in ``Q(u)`` (:class:`Scalar`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .bernstein import bernstein_coeff, evaluated_coeff
from .counts import (
    CaseParams,
    count_delta_sigma,
    count_delta_sigma_formal,
    count_gamma,
    count_gamma_formal,
)
from .scalar import QSqrt, Scalar
from .weyl import Cocharacter, admissible_set, bar, length

__all__ = [
    "IntegralReport",
    "FLReport",
    "twisted_sum",
    "twisted_closed",
    "orbital_sum",
    "orbital_closed",
    "twisted_sum_formal",
    "twisted_closed_formal",
    "orbital_sum_formal",
    "orbital_closed_formal",
    "check_twisted",
    "check_orbital",
    "check_fundamental_lemma",
    "check_not_a_norm",
]

Value = Union[QSqrt, Scalar]


def _sum(mu: Cocharacter, p: CaseParams, f: int, count: Callable, coeff: Callable) -> Value:
    total = None
    for w in admissible_set(mu):
        m = count(w, p)
        if not p.ramified:
            m = m + count(bar(w), p)
        if m == 0:
            continue
        term = coeff(mu, w, f) * m
        total = term if total is None else total + term
    return total


def _closed(mu: Cocharacter, p: CaseParams, f: int, q, u_pow: Callable) -> Value:
    zero = q * 0
    if mu.size != p.s:
        return zero
    ell = mu.length
    if ell == 0:
        if p.ramified:
            return (2 * q ** (p.a + 1) - q - 1) / (q - 1)
        return 2 * (q**p.a - 1) * (q + 1) / (q - 1)
    if p.ramified:
        return u_pow(-f * ell) * (1 - q ** (f * ell))
    return 2 * u_pow(-f * ell) * (1 - (-q) ** (f * ell))


def _numeric(p: CaseParams):
    def coeff(mu, w, f):
        return evaluated_coeff(mu.length, mu.length - length(w), f, p.q)

    def u_pow(k):
        return Scalar.u(k).evaluate(p.q)

    return coeff, u_pow


def _as_qsqrt(x, q: int) -> QSqrt:
    if isinstance(x, QSqrt):
        return x
    if x is None:
        return QSqrt(0, 0, q)
    return QSqrt(Fraction(x), 0, q)


def _as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    return Scalar.const(0 if x is None else x)


def twisted_sum(mu: Cocharacter, p: CaseParams) -> QSqrt:
    """Twisted orbital integral of ``z_mu`` (over E) at ``delta``, by summation."""
    coeff, _ = _numeric(p)
    return _as_qsqrt(_sum(mu, p, p.f, count_delta_sigma, coeff), p.q)


def twisted_closed(mu: Cocharacter, p: CaseParams) -> QSqrt:
    _, u_pow = _numeric(p)
    return _as_qsqrt(_closed(mu, p, p.f, Fraction(p.q), u_pow), p.q)


def orbital_sum(mu: Cocharacter, p: CaseParams) -> QSqrt:
    """Orbital integral of ``z_mu`` at ``gamma``, by summation; ``p.f`` is ignored."""
    coeff, _ = _numeric(p)
    return _as_qsqrt(_sum(mu, p, 1, count_gamma, coeff), p.q)


def orbital_closed(mu: Cocharacter, p: CaseParams) -> QSqrt:
    _, u_pow = _numeric(p)
    return _as_qsqrt(_closed(mu, p, 1, Fraction(p.q), u_pow), p.q)


def twisted_sum_formal(mu: Cocharacter, p: CaseParams) -> Scalar:
    return _as_scalar(_sum(mu, p, p.f, count_delta_sigma_formal, bernstein_coeff))


def twisted_closed_formal(mu: Cocharacter, p: CaseParams) -> Scalar:
    return _as_scalar(_closed(mu, p, p.f, Scalar.q(), Scalar.u))


def orbital_sum_formal(mu: Cocharacter, p: CaseParams) -> Scalar:
    return _as_scalar(_sum(mu, p, 1, count_gamma_formal, bernstein_coeff))


def orbital_closed_formal(mu: Cocharacter, p: CaseParams) -> Scalar:
    return _as_scalar(_closed(mu, p, 1, Scalar.q(), Scalar.u))


@dataclass(frozen=True)
class IntegralReport:
    mu: Cocharacter
    params: CaseParams
    summation_value: Value
    closed_value: Value
    agree: bool


def check_twisted(mu: Cocharacter, p: CaseParams, formal: bool = False) -> IntegralReport:
    if formal:
        lhs, rhs = twisted_sum_formal(mu, p), twisted_closed_formal(mu, p)
    else:
        lhs, rhs = twisted_sum(mu, p), twisted_closed(mu, p)
    return IntegralReport(mu, p, lhs, rhs, lhs == rhs)


def check_orbital(mu: Cocharacter, p: CaseParams, formal: bool = False) -> IntegralReport:
    if formal:
        lhs, rhs = orbital_sum_formal(mu, p), orbital_closed_formal(mu, p)
    else:
        lhs, rhs = orbital_sum(mu, p), orbital_closed(mu, p)
    return IntegralReport(mu, p, lhs, rhs, lhs == rhs)


@dataclass(frozen=True)
class FLReport:
    """Both sides of the base change identity, each by sum and by closed form."""

    mu: Cocharacter
    params: CaseParams
    gamma_params: CaseParams
    twisted_sum: Value
    twisted_closed: Value
    orbital_sum: Value
    orbital_closed: Value

    @property
    def agree(self) -> bool:
        return (
            self.twisted_sum == self.twisted_closed
            and self.orbital_sum == self.orbital_closed
            and self.twisted_sum == self.orbital_sum
        )

    @property
    def degenerate(self) -> bool:
        return self.params.f == 1

    def as_integral_report(self) -> IntegralReport:
        return IntegralReport(self.mu, self.params, self.twisted_sum, self.orbital_sum, self.agree)


def check_fundamental_lemma(mu: Cocharacter, p: CaseParams, formal: bool = False) -> FLReport:
    """Compare the twisted integral of ``z_mu`` with the orbital integral of ``z_{f mu}``."""
    pg = p.untwisted()
    fmu = mu.scale(p.f)
    if formal:
        vals = (
            twisted_sum_formal(mu, p),
            twisted_closed_formal(mu, p),
            orbital_sum_formal(fmu, pg),
            orbital_closed_formal(fmu, pg),
        )
    else:
        vals = (twisted_sum(mu, p), twisted_closed(mu, p), orbital_sum(fmu, pg), orbital_closed(fmu, pg))
    return FLReport(mu, p, pg, *vals)


def check_not_a_norm(mu: Cocharacter, f: int, pg: CaseParams) -> IntegralReport:
    """Orbital integral of the base change of ``z_mu`` at ``gamma`` with ``f`` not dividing its size.

    ``pg`` describes ``gamma`` over the base field.  The expected value is 0.
    """
    if pg.s % f == 0:
        raise ValueError(f"f={f} divides val det gamma = {pg.s}; gamma may be a norm")
    fmu = mu.scale(f)
    lhs, rhs = orbital_sum(fmu, pg), orbital_closed(fmu, pg)
    zero = QSqrt(0, 0, pg.q)
    return IntegralReport(fmu, pg, lhs, rhs, lhs == zero and rhs == zero)
