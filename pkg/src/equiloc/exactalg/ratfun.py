"""Rational functions whose denominators are products of integer linear forms.

Denominator factors are kept factored.  Each form is stored primitive with a
positive leading coordinate; the scalar and sign this requires are pushed
into the numerator, so two equal rational functions in reduced form are
structurally equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from ..errors import NotPolynomial, RankMismatch
from .poly import MultiPoly, format_rational, to_fraction


def canonical_form(alpha: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Split an integer vector into (primitive, leading-positive form, scale)."""
    alpha = tuple(int(a) for a in alpha)
    if not any(alpha):
        raise ZeroDivisionError("zero linear form in a denominator")
    g = 0
    for a in alpha:
        g = gcd(g, a)
    lead = next(a for a in alpha if a)
    if lead < 0:
        g = -g
    return tuple(a // g for a in alpha), g


def _merge(factors) -> tuple:
    counts: dict = {}
    for form, mult in factors:
        counts[form] = counts.get(form, 0) + mult
    return tuple(sorted((f, m) for f, m in counts.items() if m))


@dataclass(frozen=True)
class RatFun:
    numerator: MultiPoly
    denominator: tuple = ()  # sorted ((form, multiplicity), ...)

    @property
    def rank(self) -> int:
        return self.numerator.rank

    @classmethod
    def from_parts(cls, numerator: MultiPoly, forms: Sequence[Sequence[int]] = ()) -> RatFun:
        """``numerator / prod(<form, X>)`` with forms given as integer vectors."""
        scale = Fraction(1)
        factors = []
        for alpha in forms:
            if len(alpha) != numerator.rank:
                raise RankMismatch(f"form {tuple(alpha)} does not have rank {numerator.rank}")
            form, g = canonical_form(alpha)
            scale *= g
            factors.append((form, 1))
        return cls(numerator / scale, _merge(factors))

    @classmethod
    def polynomial(cls, p: MultiPoly) -> RatFun:
        return cls(p, ())

    def denominator_degree(self) -> int:
        return sum(m for _, m in self.denominator)

    def denominator_value(self, point) -> Fraction:
        value = Fraction(1)
        for form, mult in self.denominator:
            value *= sum(to_fraction(a) * to_fraction(x) for a, x in zip(form, point)) ** mult
        return value

    def evaluate(self, point) -> Fraction:
        den = self.denominator_value(point)
        if not den:
            raise ZeroDivisionError(f"denominator vanishes at {tuple(point)}")
        return self.numerator.evaluate(point) / den

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __add__(self, other: RatFun) -> RatFun:
        return ratfun_sum_normalize([self, other])

    def __neg__(self) -> RatFun:
        return RatFun(-self.numerator, self.denominator)

    def __sub__(self, other: RatFun) -> RatFun:
        return ratfun_sum_normalize([self, -other])

    def __mul__(self, other) -> RatFun:
        if isinstance(other, RatFun):
            if other.rank != self.rank:
                raise RankMismatch(f"rank {self.rank} vs {other.rank}")
            return _cancel(self.numerator * other.numerator,
                           _merge(self.denominator + other.denominator))
        if isinstance(other, MultiPoly):
            return _cancel(self.numerator * other, self.denominator)
        return RatFun(self.numerator * other, self.denominator)

    __rmul__ = __mul__

    def normalize(self) -> RatFun:
        return _cancel(self.numerator, self.denominator)

    def __str__(self):
        num = str(self.numerator)
        if not self.denominator:
            return num
        return f"({num})/({format_denominator(self.denominator)})"


def format_linear_form(form: Sequence[int]) -> str:
    parts = []
    for i, a in enumerate(form):
        if a:
            parts.append(f"{format_rational(a)}*X{i + 1}")
    return " + ".join(parts)


def format_denominator(denominator) -> str:
    pieces = []
    for form, mult in denominator:
        base = f"({format_linear_form(form)})"
        pieces.append(base if mult == 1 else f"{base}^{mult}")
    return "*".join(pieces) if pieces else "1"


def _cancel(numerator: MultiPoly, denominator: tuple) -> RatFun:
    if numerator.is_zero():
        return RatFun(numerator, ())
    remaining = []
    for form, mult in denominator:
        while mult:
            q = numerator.divide_linear(form)
            if q is None:
                break
            numerator = q
            mult -= 1
        if mult:
            remaining.append((form, mult))
    return RatFun(numerator, tuple(remaining))


def ratfun_sum_normalize(terms: Sequence[RatFun]) -> RatFun:
    """Exact sum over the lcm of the denominator multisets, fully reduced."""
    terms = list(terms)
    if not terms:
        raise ValueError("empty sum has no rank")
    rank = terms[0].rank
    if any(t.rank != rank for t in terms):
        raise RankMismatch("all terms must share one rank")
    lcm: dict = {}
    for t in terms:
        for form, mult in t.denominator:
            lcm[form] = max(lcm.get(form, 0), mult)
    total = MultiPoly.zero(rank)
    for t in terms:
        own = dict(t.denominator)
        factor = MultiPoly.constant(rank, 1)
        for form, mult in lcm.items():
            missing = mult - own.get(form, 0)
            if missing:
                factor = factor * MultiPoly.linear_form(form) ** missing
        total = total + t.numerator * factor
    return _cancel(total, tuple(sorted(lcm.items())))


def as_polynomial(f: RatFun) -> MultiPoly:
    g = f.normalize()
    if g.denominator:
        raise NotPolynomial(f"denominator {format_denominator(g.denominator)} survives")
    return g.numerator


@dataclass(frozen=True)
class ExpRatTerm:
    """``exp(<exponent, X>) * coeff(X)``."""

    exponent: tuple
    coeff: RatFun

    def __post_init__(self):
        exponent = tuple(to_fraction(x) for x in self.exponent)
        object.__setattr__(self, "exponent", exponent)
        if len(exponent) != self.coeff.rank:
            raise RankMismatch("exponent and coefficient ranks differ")

    @property
    def rank(self) -> int:
        return self.coeff.rank

    def __mul__(self, other: ExpRatTerm) -> ExpRatTerm:
        return ExpRatTerm(
            tuple(a + b for a, b in zip(self.exponent, other.exponent)), self.coeff * other.coeff
        )
