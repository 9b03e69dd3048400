"""Exact multivariate polynomials over the rationals.

Terms are stored sparsely as ``{exponent tuple: Fraction}``; zero coefficients
are never kept.  Serialization and iteration use graded-lex order, highest
degree first.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from ..errors import RankMismatch

Exponent = tuple


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def format_rational(q) -> str:
    """Canonical ``p/q`` text, denominator omitted when it is 1."""
    q = to_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def grlex_key(exponent: Exponent):
    return (sum(exponent), exponent)


class MultiPoly:
    __slots__ = ("rank", "_terms", "_hash")

    def __init__(self, rank: int, terms=None):
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        self.rank = rank
        clean = {}
        if terms:
            for exp, c in dict(terms).items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != rank:
                    raise RankMismatch(f"exponent {exp} does not have length {rank}")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent {exp}")
                c = to_fraction(c)
                if c:
                    clean[exp] = clean.get(exp, Fraction(0)) + c
                    if not clean[exp]:
                        del clean[exp]
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, rank: int) -> MultiPoly:
        return cls(rank)

    @classmethod
    def constant(cls, rank: int, c) -> MultiPoly:
        return cls(rank, {(0,) * rank: c})

    @classmethod
    def variable(cls, rank: int, i: int) -> MultiPoly:
        exp = [0] * rank
        exp[i] = 1
        return cls(rank, {tuple(exp): 1})

    @classmethod
    def linear_form(cls, coeffs: Sequence, constant=0) -> MultiPoly:
        rank = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            exp = [0] * rank
            exp[i] = 1
            terms[tuple(exp)] = c
        if constant:
            terms[(0,) * rank] = constant
        return cls(rank, terms)

    # -- basic protocol -------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms in graded-lex order, highest first."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def coefficient(self, exponent) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.rank)

    def homogeneous_part(self, d: int) -> MultiPoly:
        return MultiPoly(self.rank, {e: c for e, c in self._terms.items() if sum(e) == d})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.rank, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self.rank}, {self})"

    def __str__(self):
        return format_poly(self)

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            if other.rank != self.rank:
                raise RankMismatch(f"rank {self.rank} vs {other.rank}")
            return other
        return MultiPoly.constant(self.rank, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return MultiPoly(self.rank, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.rank, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = to_fraction(other)
            return MultiPoly(self.rank, {e: c * v for e, v in self._terms.items()})
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.rank, terms)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        c = to_fraction(scalar)
        return MultiPoly(self.rank, {e: v / c for e, v in self._terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.rank, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- evaluation and substitution --------------------------------------
    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.rank:
            raise RankMismatch(f"point of length {len(point)} for rank {self.rank}")
        point = [to_fraction(p) for p in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term *= x**k
            total += term
        return total

    def substitute(self, images: Sequence[MultiPoly]) -> MultiPoly:
        """Replace variable ``i`` by ``images[i]`` (all of a common rank)."""
        if len(images) != self.rank:
            raise RankMismatch("one image per variable is required")
        if not images:
            return self
        target = images[0].rank
        powers = [{0: MultiPoly.constant(target, 1)} for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * images[i]
            return cache[k]

        result = MultiPoly.zero(target)
        for e, c in self._terms.items():
            term = MultiPoly.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def shift(self, offset: Sequence) -> MultiPoly:
        """Return ``P(X - offset)``."""
        images = [
            MultiPoly.variable(self.rank, i) - to_fraction(a) for i, a in enumerate(offset)
        ]
        return self.substitute(images)

    def derivative(self, i: int) -> MultiPoly:
        terms = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                terms[tuple(d)] = c * e[i]
        return MultiPoly(self.rank, terms)

    def apply_differential(self, operator: MultiPoly) -> MultiPoly:
        """Apply ``operator(d/dX_1, ..., d/dX_r)`` to this polynomial."""
        result = MultiPoly.zero(self.rank)
        for e, c in operator._terms.items():
            term = self
            for i, k in enumerate(e):
                for _ in range(k):
                    term = term.derivative(i)
            result = result + term * c
        return result

    def divide_linear(self, form: Sequence[int]):
        """Exact quotient by the linear form ``sum form[i]*X_i``, or None.

        Lex division with the first nonzero coordinate of ``form`` as the
        leading variable; the linear form is monic up to a constant in it.
        """
        pivot = next((i for i, a in enumerate(form) if a), None)
        if pivot is None:
            raise ZeroDivisionError("division by the zero linear form")
        lead = Fraction(form[pivot])

        def key(e):
            return (e[pivot],) + e

        remainder = dict(self._terms)
        quotient = {}
        while remainder:
            e = max(remainder, key=key)
            if e[pivot] == 0:
                return None
            c = remainder[e] / lead
            q = list(e)
            q[pivot] -= 1
            q = tuple(q)
            quotient[q] = quotient.get(q, Fraction(0)) + c
            for i, a in enumerate(form):
                if not a:
                    continue
                m = list(q)
                m[i] += 1
                m = tuple(m)
                v = remainder.get(m, Fraction(0)) - c * a
                if v:
                    remainder[m] = v
                else:
                    remainder.pop(m, None)
        return MultiPoly(self.rank, quotient)


def format_poly(p: MultiPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.items():
        factors = [format_rational(c)]
        for i, k in enumerate(e):
            if k == 1:
                factors.append(f"X{i + 1}")
            elif k:
                factors.append(f"X{i + 1}^{k}")
        parts.append("*".join(factors))
    return " + ".join(parts)


def monomials(rank: int, degree: int) -> list:
    """All exponent vectors of total degree ``degree``, graded-lex descending."""
    if rank == 0:
        return [()] if degree == 0 else []
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for k in range(remaining, -1, -1):
            rec(prefix + (k,), remaining - k, slots - 1)

    rec((), degree, rank)
    return out


def exp_series_coefficient(c: Fraction, j: int) -> Fraction:
    """Coefficient of s^j in exp(c*s)."""
    return to_fraction(c) ** j / factorial(j)


def solve_linear_system(matrix: list, rhs: list) -> list | None:
    """Gauss-Jordan over the rationals for a square system; None if singular."""
    n = len(matrix)
    a = [[to_fraction(x) for x in row] + [to_fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n] for row in a]


def dot(u: Iterable, v: Iterable):
    return sum((to_fraction(a) * to_fraction(b) for a, b in zip(u, v)), Fraction(0))
