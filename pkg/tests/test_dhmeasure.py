from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equiloc.dhmeasure import (
    chamber_difference,
    dh_density_at,
    dh_measure,
    martin_constant,
    nonabelian_reduced_integral,
    total_mass,
    wall_jump,
)
from equiloc.errors import NotAWallPoint, OnWall, RankUnsupported
from equiloc.exactalg import MultiPoly
from equiloc.geometry import build_toric, coadjoint, power, restrict_subtorus
from equiloc.localize import symplectic_volume
from equiloc.quantize import _in_polytope

from conftest import POLYTOPES
from oracles import invariant_count, orbit_convolution_density

ONE1 = MultiPoly.constant(1, 1)


def orbit_power(m):
    return power(coadjoint("A1", (1,)), m)


def test_cp1_measure(cp1):
    m = dh_measure(cp1, (1,))
    assert sorted(w.offset for w in m.walls) == [0, 1]
    assert dh_density_at(m, (Fraction(1, 2),)) == 1
    assert dh_density_at(m, (2,)) == 0
    assert dh_density_at(m, (-1,)) == 0
    with pytest.raises(OnWall):
        dh_density_at(m, (1,))


@pytest.mark.parametrize("beta", [(1, 2), (2, -1), (-3, 1)])
def test_cp2_indicator(cp2, beta):
    m = dh_measure(cp2, beta)
    for c in m.chambers:
        expected = 1 if _in_polytope(c.sample, POLYTOPES["triangle"], 1) else 0
        assert c.density == MultiPoly.constant(2, expected)


def test_triple_orbit_walls_and_density():
    m = dh_measure(orbit_power(3), (1,))
    assert sorted(w.offset for w in m.walls) == [-3, -1, 1, 3]
    for c in m.chambers:
        assert c.density.degree() <= 2
    for s in [Fraction(j, 4) for j in range(-15, 16) if j % 4]:
        assert dh_density_at(m, (s,)) == orbit_convolution_density(s, 3)
        assert dh_density_at(m, (s,)) == dh_density_at(m, (-s,))


@pytest.mark.parametrize("m", [1, 2, 4, 5])
def test_orbit_powers_match_irwin_hall(m):
    measure = dh_measure(orbit_power(m), (1,))
    for j in range(-4 * m + 1, 4 * m):
        s = Fraction(j, 4) + Fraction(1, 8)
        assert dh_density_at(measure, (s,)) == orbit_convolution_density(s, m)


def test_cp1_jumps(cp1):
    assert wall_jump(cp1, 0) == ONE1
    assert wall_jump(cp1, 1) == -ONE1
    assert wall_jump(cp1, 1, direction=-1) == ONE1
    with pytest.raises(NotAWallPoint):
        wall_jump(cp1, Fraction(1, 2))


def test_jump_needs_rank_one(cp2):
    with pytest.raises(RankUnsupported):
        wall_jump(cp2, (0, 0))


def _rank1_test_spaces():
    cp2 = build_toric(POLYTOPES["triangle"], 1)
    out = {"cp1": build_toric(POLYTOPES["segment"], 1), "orbit3": orbit_power(3)}
    for iota in ([[1, 2]], [[2, 1]], [[1, -1]]):
        out[f"cp2{iota}"] = restrict_subtorus(cp2, iota)
    out["hirzebruch[1,2]"] = restrict_subtorus(build_toric(POLYTOPES["hirzebruch"], 2), [[1, 2]])
    out["orbit4"] = orbit_power(4)
    return out


RANK1 = _rank1_test_spaces()


@pytest.mark.parametrize("name", sorted(RANK1))
@pytest.mark.parametrize("direction", [1, -1])
def test_jump_routes_agree(name, direction):
    space = RANK1[name]
    measure = dh_measure(space, (1,))
    for a in sorted({p.moment[0] for p in space.points}):
        assert wall_jump(space, a, direction) == chamber_difference(measure, a, direction)


@pytest.mark.parametrize("name", sorted(RANK1))
def test_jump_smoothness(name):
    # m transverse weights at the wall: the jump vanishes to order m - 2 there
    space = RANK1[name]
    for p in space.points:
        a = p.moment[0]
        m = len(p.tangent_weights)
        jump = wall_jump(space, a)
        for order in range(m - 1):
            d = jump
            for _ in range(order):
                d = d.derivative(0)
            assert d.evaluate((a,)) == 0


def test_triple_orbit_jump_at_one():
    space = orbit_power(3)
    jump = wall_jump(space, 1)
    assert jump.degree() <= 2
    assert jump == chamber_difference(dh_measure(space, (1,)), 1)


SPACES = {
    **{f"{n}-k{k}": (lambda n=n, k=k: build_toric(POLYTOPES[n], k)) for n in POLYTOPES for k in (1, 3)},
    "a2": lambda: coadjoint("A2", (1, 1)),
    "a2-21": lambda: coadjoint("A2", (2, 1)),
    "b2": lambda: coadjoint("B2", (1, 1)),
    "a1-2": lambda: coadjoint("A1", (2,)),
    "orbit5": lambda: orbit_power(5),
}


@pytest.mark.parametrize("name", sorted(SPACES))
def test_total_mass_is_volume(name):
    space = SPACES[name]()
    beta = (1,) if space.rank == 1 else (3, 1)
    assert total_mass(dh_measure(space, beta)) == symplectic_volume(space)


@pytest.mark.parametrize("name", sorted(SPACES))
@settings(max_examples=6)
@given(beta=st.tuples(st.integers(-7, 7), st.integers(-7, 7)))
def test_measure_beta_independent(name, beta):
    space = SPACES[name]()
    beta = beta[: space.rank]
    weights = space.all_weights()
    if any(sum(a * b for a, b in zip(w, beta)) == 0 for w in weights):
        return
    reference = dh_measure(space, (1,) if space.rank == 1 else (3, 1))
    assert dh_measure(space, beta) == reference


def test_toric_measure_is_indicator_of_scaled_polytope():
    P = POLYTOPES["hirzebruch"]
    for k in (1, 2, 3):
        m = dh_measure(build_toric(P, k), (2, 1))
        for c in m.chambers:
            assert c.density == MultiPoly.constant(2, int(_in_polytope(c.sample, P, k)))


def test_martin_four_orbits():
    assert nonabelian_reduced_integral(orbit_power(4)) == 1


@pytest.mark.parametrize("copies", [4, 5, 6])
def test_martin_matches_invariant_growth(copies):
    value = nonabelian_reduced_integral(orbit_power(copies))
    # even k: the center of SU(2) then acts trivially on the k-th power of L
    k = 120
    slope = Fraction(invariant_count(k, copies), k ** (copies - 3))
    assert abs(slope / value - 1) < Fraction(1, 20)


def test_martin_singular_value():
    with pytest.raises(OnWall):
        nonabelian_reduced_integral(orbit_power(2))


def test_martin_product_factorizes():
    a1 = nonabelian_reduced_integral(orbit_power(4))
    both = power(coadjoint("A1xA1", (1, 1)), 4)
    assert nonabelian_reduced_integral(both) == a1 * a1
    measure = dh_measure(both, (3, 1))
    rank1 = dh_measure(orbit_power(4), (1,))
    for x in (Fraction(1, 3), Fraction(-5, 2), Fraction(7, 5)):
        for y in (Fraction(1, 7), Fraction(3, 2)):
            assert dh_density_at(measure, (x, y)) == dh_density_at(rank1, (x,)) * dh_density_at(rank1, (y,))


def test_martin_beta_independent():
    space = orbit_power(5)
    assert nonabelian_reduced_integral(space, (1,)) == nonabelian_reduced_integral(space, (-1,))


def test_martin_constant_a1():
    assert martin_constant(orbit_power(4)) == -2
