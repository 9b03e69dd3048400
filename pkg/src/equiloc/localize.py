"""Fixed-point integration: Berline-Vergne sums, volumes, DH Fourier transforms.

Everything is in the "Fourier gauge"

    F(X) = sum_p exp(<Phi(p), X>) / prod_i <alpha_i(p), X>

with a real exponential and no factors of i or 2 pi.  With this gauge the
homogeneous degree-d part of F is (-1)^n times the d-th moment
integral of <xi, X>^d / d! against the DH measure, so the symplectic volume
is (-1)^n times the constant term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import _parallel
from .errors import InvalidParameter
from .exactalg import (
    ExpRatTerm,
    MultiPoly,
    RatFun,
    as_polynomial,
    ratfun_sum_normalize,
    taylor_coefficient,
)
from .geometry import HamiltonianSpace


def orientation_sign(space: HamiltonianSpace) -> int:
    """The (-1)^n factor between F(X) and the Liouville measure."""
    return (-1) ** space.half_dim


@dataclass(frozen=True)
class EquivariantClass:
    values: Mapping  # point label -> MultiPoly
    include_symplectic_exponential: bool = False

    @classmethod
    def constant(cls, space: HamiltonianSpace, c=1, exponential=False) -> EquivariantClass:
        return cls({p.label: MultiPoly.constant(space.rank, c) for p in space.points}, exponential)

    @classmethod
    def moment_pairing(cls, space: HamiltonianSpace, exponential=False) -> EquivariantClass:
        """The degree-1 class p -> <Phi(p), X>."""
        return cls(
            {p.label: MultiPoly.linear_form(p.moment) for p in space.points}, exponential
        )


def _per_point_term(args):
    p, value, exponential = args
    coeff = RatFun.from_parts(value, p.tangent_weights)
    if exponential:
        return ExpRatTerm(p.moment, coeff)
    return coeff


def abbv_integrate(space: HamiltonianSpace, eta: EquivariantClass):
    """Localization sum of ``eta`` over the fixed points.

    Without the symplectic exponential the result must be a polynomial and is
    returned as a ``MultiPoly``; with it, the list of ``ExpRatTerm`` summands.
    """
    missing = [p.label for p in space.points if p.label not in eta.values]
    if missing:
        raise InvalidParameter(f"class has no value at {missing}")
    for v in eta.values.values():
        if v.rank != space.rank:
            raise InvalidParameter("class value rank differs from space rank")
    jobs = [(p, eta.values[p.label], eta.include_symplectic_exponential) for p in space.points]
    terms = _parallel.ordered_map(_per_point_term, jobs)
    if eta.include_symplectic_exponential:
        return terms
    return as_polynomial(ratfun_sum_normalize(terms))


def dh_fourier(space: HamiltonianSpace) -> list:
    return abbv_integrate(space, EquivariantClass.constant(space, 1, exponential=True))


def symplectic_volume(space: HamiltonianSpace) -> Fraction:
    value = taylor_coefficient(dh_fourier(space), 0).constant_term()
    return orientation_sign(space) * value


def dh_moment(space: HamiltonianSpace, degree: int) -> MultiPoly:
    """The polynomial X -> integral of <xi, X>^d / d! against the DH measure."""
    return taylor_coefficient(dh_fourier(space), degree) * orientation_sign(space)
