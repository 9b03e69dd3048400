from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from equiloc.exactalg import ExpRatTerm, MultiPoly, RatFun
from equiloc.geometry import build_toric, coadjoint, point_space, power, product, restrict_subtorus
from equiloc.localize import (
    EquivariantClass,
    abbv_integrate,
    dh_fourier,
    dh_moment,
    symplectic_volume,
)

from conftest import POLYTOPES
from oracles import shoelace_area


def test_cp2_euler_sum(cp2):
    assert abbv_integrate(cp2, EquivariantClass.constant(cp2, 1)).is_zero()


def test_cp1_moment_class(cp1):
    result = abbv_integrate(cp1, EquivariantClass.moment_pairing(cp1))
    assert result.degree() == 0
    assert abs(result.constant_term()) == 1


def test_point_space_returns_class():
    q = MultiPoly.linear_form((2, -1)) ** 2 + 3
    space = point_space(2)
    assert abbv_integrate(space, EquivariantClass({"pt": q})) == q


@pytest.mark.parametrize("k", [1, 2, 5])
def test_cp1_volume(k):
    assert symplectic_volume(build_toric(POLYTOPES["segment"], k)) == k


@pytest.mark.parametrize("k", [1, 2, 3])
def test_triangle_volume(k):
    assert symplectic_volume(build_toric(POLYTOPES["triangle"], k)) == Fraction(k * k, 2)


@pytest.mark.parametrize("name", ["triangle", "square", "hirzebruch"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_toric_volume_against_shoelace(name, k):
    P = POLYTOPES[name]
    assert symplectic_volume(build_toric(P, k)) == k ** 2 * shoelace_area(P.vertices)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_a1_orbit_volume_is_interval_half_length(n):
    # the quantization fixes the measure: dim V_{kn} = kn + 1 grows like kn
    assert symplectic_volume(coadjoint("A1", (n,))) == n


def test_cp1_fourier_terms(cp1):
    one = MultiPoly.constant(1, 1)
    assert dh_fourier(cp1) == [
        ExpRatTerm((0,), RatFun.from_parts(one, [(1,)])),
        ExpRatTerm((1,), RatFun.from_parts(one, [(-1,)])),
    ]


def test_a1_orbit_fourier_terms():
    terms = dh_fourier(coadjoint("A1", (1,)))
    assert [t.exponent for t in terms] == [(1,), (-1,)]
    assert terms[0].coeff.evaluate((1,)) == Fraction(-1, 2)
    assert terms[1].coeff.evaluate((1,)) == Fraction(1, 2)


def test_product_fourier_terms(cp1):
    a, b = dh_fourier(cp1), dh_fourier(cp1)
    assert dh_fourier(product(cp1, cp1)) == [s * t for s in a for t in b]


SPACES = {
    "cp1": lambda: build_toric(POLYTOPES["segment"], 2),
    "cp2": lambda: build_toric(POLYTOPES["triangle"], 1),
    "hirzebruch": lambda: build_toric(POLYTOPES["hirzebruch"], 1),
    "a1": lambda: coadjoint("A1", (2,)),
    "a2": lambda: coadjoint("A2", (1, 1)),
    "b2": lambda: coadjoint("B2", (1, 1)),
}


@pytest.mark.parametrize("a", ["cp1", "a1"])
@pytest.mark.parametrize("b", ["cp1", "a1"])
def test_volume_multiplicative(a, b):
    A, B = SPACES[a](), SPACES[b]()
    assert symplectic_volume(product(A, B)) == symplectic_volume(A) * symplectic_volume(B)


def test_volume_multiplicative_rank2():
    A, B = SPACES["cp2"](), SPACES["a2"]()
    assert symplectic_volume(product(A, B)) == symplectic_volume(A) * symplectic_volume(B)


@pytest.mark.parametrize("name", sorted(SPACES))
def test_volume_positive(name):
    assert symplectic_volume(SPACES[name]()) > 0


@pytest.mark.parametrize("name", sorted(SPACES))
@given(data=st.data())
def test_low_degree_classes_vanish(name, data):
    space = SPACES[name]()
    if space.half_dim < 2:
        return
    degree = data.draw(st.integers(0, space.half_dim - 1))
    coeffs = data.draw(st.lists(st.integers(-3, 3), min_size=space.rank, max_size=space.rank))
    # the class p -> <Phi(p) + c, X>^d is equivariantly closed
    values = {
        p.label: MultiPoly.linear_form([m + c for m, c in zip(p.moment, coeffs)]) ** degree
        for p in space.points
    }
    assert abbv_integrate(space, EquivariantClass(values)).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_a1_first_moment_vanishes(n):
    assert dh_moment(coadjoint("A1", (n,)), 1).is_zero()


def test_fourier_stable_under_restriction(cp2):
    iota = [[2, 1]]
    restricted = dh_fourier(restrict_subtorus(cp2, iota))
    pushed = []
    for term in dh_fourier(cp2):
        (row,) = iota
        weights = [p for p in cp2.points if p.moment == term.exponent][0].tangent_weights
        image = [(sum(r * a for r, a in zip(row, w)),) for w in weights]
        pushed.append(ExpRatTerm((sum(r * x for r, x in zip(row, term.exponent)),),
                                 RatFun.from_parts(MultiPoly.constant(1, 1), image)))
    assert restricted == pushed


def test_power_volume():
    assert symplectic_volume(power(coadjoint("A1", (1,)), 4)) == 1
