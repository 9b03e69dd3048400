"""Taylor coefficients at X = 0 of sums of exp(<mu,X>) * R(X).

Each summand may have a pole at the origin while the sum does not.  The sum
is expanded along lines X = s*v; the coefficient of s^d along v equals the
homogeneous degree-d part evaluated at v, so evaluating on a unisolvent set of
directions and solving a small linear system recovers that part exactly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import count, product
from typing import Sequence

from ..errors import PoleAtZero, RankMismatch
from .poly import (
    MultiPoly,
    dot,
    exp_series_coefficient,
    monomials,
    solve_linear_system,
)
from .ratfun import ExpRatTerm


def line_coefficients(terms: Sequence[ExpRatTerm], direction, degree: int) -> dict:
    """Laurent coefficients of the sum restricted to X = s*direction.

    Returns ``{e: coefficient of s^e}`` for every ``e`` from the most negative
    possible order up to ``degree``.
    """
    out: dict = {}
    for t in terms:
        m = t.coeff.denominator_degree()
        den = t.coeff.denominator_value(direction)
        if not den:
            raise ZeroDivisionError("direction lies on a denominator hyperplane")
        rate = dot(t.exponent, direction)
        num = t.coeff.numerator
        num_deg = num.degree()
        parts = [num.homogeneous_part(k).evaluate(direction) for k in range(max(num_deg, 0) + 1)]
        for e in range(-m, degree + 1):
            # coefficient of s^(e + m) in num(s v) * exp(s * rate)
            target = e + m
            acc = Fraction(0)
            for k, nk in enumerate(parts):
                j = target - k
                if j < 0:
                    break
                if nk:
                    acc += nk * exp_series_coefficient(rate, j)
            if acc:
                out[e] = out.get(e, Fraction(0)) + acc / den
    return {e: c for e, c in out.items() if c}


def _candidate_directions(rank: int, degree: int):
    """Deterministic stream of unisolvent direction sets.

    Points (1, o + q*a) with a running over the principal lattice
    {a in N^(rank-1), |a| <= degree}; affine images of that lattice are
    unisolvent for polynomials of degree <= degree in rank-1 variables.
    """
    lattice = [a for k in range(degree + 1) for a in monomials(rank - 1, k)] if rank > 1 else [()]
    offsets = [Fraction(p, 7) for p in (1, 3, 5, 11, 13, 17, 19, 23)]
    for scale in count(1):
        for shift in offsets:
            o = [shift * (i + 1) for i in range(rank - 1)]
            yield [
                (Fraction(1),) + tuple(oi + scale * ai for oi, ai in zip(o, a)) for a in lattice
            ]


def taylor_coefficient(terms: Sequence[ExpRatTerm], degree: int) -> MultiPoly:
    """Homogeneous degree-``degree`` part of the expansion of the sum at 0."""
    terms = list(terms)
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if not terms:
        raise ValueError("empty term list")
    rank = terms[0].rank
    if any(t.rank != rank for t in terms):
        raise RankMismatch("all terms must share one rank")
    if rank == 0:
        total = Fraction(0)
        for t in terms:
            if degree == 0:
                total += t.coeff.numerator.constant_term()
        return MultiPoly.constant(0, total)

    basis = monomials(rank, degree)
    for directions in _candidate_directions(rank, degree):
        if any(not t.coeff.denominator_value(v) for v in directions for t in terms):
            continue
        rows, values = [], []
        for v in directions:
            coeffs = line_coefficients(terms, v, degree)
            bad = {e: c for e, c in coeffs.items() if e < 0}
            if bad:
                e = min(bad)
                raise PoleAtZero(f"Laurent coefficient of order {e} along {tuple(v)} is {bad[e]}")
            rows.append([_monomial_value(b, v) for b in basis])
            values.append(coeffs.get(degree, Fraction(0)))
        solution = solve_linear_system(rows, values)
        if solution is None:
            continue
        return MultiPoly(rank, dict(zip(basis, solution)))
    raise AssertionError("unreachable")  # pragma: no cover


def _monomial_value(exponent, point) -> Fraction:
    value = Fraction(1)
    for x, k in zip(point, exponent):
        if k:
            value *= x**k
    return value


def generic_direction(forms: Sequence[Sequence[int]], rank: int) -> tuple:
    """First integer vector, in a fixed enumeration, off every hyperplane."""
    for radius in count(1):
        for v in product(range(-radius, radius + 1), repeat=rank):
            if max(abs(x) for x in v) != radius:
                continue
            if all(dot(f, v) for f in forms):
                return v
    raise AssertionError("unreachable")  # pragma: no cover
