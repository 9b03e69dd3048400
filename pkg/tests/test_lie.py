from __future__ import annotations

from itertools import product as cartesian

import pytest
from hypothesis import given
from hypothesis import strategies as st

from equiloc.errors import NotDominant, UnpointedParts, UnsupportedType
from equiloc.exactalg import Character, MultiPoly
from equiloc.lie import (
    build_root_system,
    decompose_character,
    kostant_partition,
    weyl_character,
    weyl_dimension,
    weyl_group,
    weyl_integration_factor,
)

from oracles import clebsch_gordan, sl2_isotypic, sl2_weights, tensor_weights

LABELS = ["A1", "A1xA1", "A2", "B2", "A3"]


def test_a1_data():
    rs = build_root_system("A1")
    assert rs.positive_roots == ((2,),)
    assert rs.rho == (1,)


def test_a2_data():
    rs = build_root_system("A2")
    assert len(rs.positive_roots) == 3
    assert rs.rho == (1, 1)
    assert set(rs.positive_roots) == {(2, -1), (-1, 2), (1, 1)}


def test_a1xa1_orthogonal_roots():
    rs = build_root_system("A1xA1")
    assert set(rs.positive_roots) == {(2, 0), (0, 2)}
    assert rs.inner((2, 0), (0, 2)) == 0


def test_unknown_label():
    with pytest.raises(UnsupportedType):
        build_root_system("G2")


@pytest.mark.parametrize("label,order", [("A1", 2), ("A1xA1", 4), ("A2", 6), ("B2", 8), ("A3", 24)])
def test_weyl_group_order(label, order):
    group = weyl_group(build_root_system(label))
    assert len(group) == order
    assert len({w.matrix for w in group}) == order
    # determinant signs split evenly
    assert sum(w.sign for w in group) == 0


def test_a1_character_ladder():
    assert weyl_character(build_root_system("A1"), (2,)).multiplicities == {(-2,): 1, (0,): 1, (2,): 1}


@pytest.mark.parametrize("label", LABELS)
def test_trivial_character(label):
    rs = build_root_system(label)
    zero = (0,) * rs.rank
    assert weyl_character(rs, zero).multiplicities == {zero: 1}
    assert weyl_dimension(rs, zero) == 1


def test_a2_adjoint():
    chi = weyl_character(build_root_system("A2"), (1, 1))
    assert chi.dimension() == 8
    assert chi[(0, 0)] == 2


def test_dimensions():
    assert weyl_dimension(build_root_system("A2"), (1, 0)) == 3
    assert weyl_dimension(build_root_system("B2"), (1, 0)) == 5
    assert weyl_dimension(build_root_system("B2"), (0, 1)) == 4
    for n in range(6):
        assert weyl_dimension(build_root_system("A1"), (n,)) == n + 1


def test_negative_weight_rejected():
    with pytest.raises(NotDominant):
        weyl_character(build_root_system("A2"), (1, -1))


@pytest.mark.parametrize("label", LABELS)
def test_character_dimension_matches_weyl_formula(label):
    rs = build_root_system(label)
    limit = 5 if rs.rank <= 2 else 2
    for lam in cartesian(range(limit + 1), repeat=rs.rank):
        if sum(lam) > limit:
            continue
        assert weyl_character(rs, lam).dimension() == weyl_dimension(rs, lam)


@pytest.mark.parametrize("label,lam", [("A2", (2, 1)), ("B2", (1, 1)), ("A3", (1, 0, 1))])
def test_character_weyl_symmetric(label, lam):
    rs = build_root_system(label)
    chi = weyl_character(rs, lam)
    for w in weyl_group(rs):
        assert {w.act(mu): m for mu, m in chi.items()} == chi.multiplicities


def test_decompose_examples():
    rs = build_root_system("A1")
    v1 = weyl_character(rs, (1,))
    assert decompose_character(rs, v1 * v1) == [((2,), 1), ((0,), 1)]
    assert decompose_character(rs, weyl_character(rs, (0,))) == [((0,), 1)]
    assert sorted(decompose_character(rs, v1 * v1 * v1)) == [((1,), 2), ((3,), 1)]


@pytest.mark.parametrize("a,b", [(a, b) for a in range(7) for b in range(7)])
def test_clebsch_gordan(a, b):
    rs = build_root_system("A1")
    chi = weyl_character(rs, (a,)) * weyl_character(rs, (b,))
    assert chi.multiplicities == {(w,): m for w, m in tensor_weights([a, b]).items()}
    assert {lam[0]: m for lam, m in decompose_character(rs, chi)} == clebsch_gordan(a, b)


def test_sl2_oracle_self_check():
    assert sl2_isotypic(tensor_weights([2, 3])) == clebsch_gordan(2, 3)
    assert sl2_weights(3) == {-3: 1, -1: 1, 1: 1, 3: 1}


@pytest.mark.parametrize("label,a,b", [("A2", (1, 0), (0, 1)), ("A2", (1, 1), (1, 0)), ("B2", (1, 0), (0, 1))])
def test_decompose_reconstructs_dimension(label, a, b):
    rs = build_root_system(label)
    parts = decompose_character(rs, weyl_character(rs, a) * weyl_character(rs, b))
    assert sum(m * weyl_dimension(rs, lam) for lam, m in parts) == weyl_dimension(rs, a) * weyl_dimension(rs, b)
    rebuilt = Character(rs.rank, {})
    for lam, m in parts:
        rebuilt = rebuilt + weyl_character(rs, lam).scale(m)
    assert rebuilt == weyl_character(rs, a) * weyl_character(rs, b)


def test_kostant_examples():
    assert kostant_partition((0,), [(2,), (3,)]) == 1
    assert kostant_partition((4,), [(2,)]) == 1
    assert kostant_partition((6,), [(2,), (3,)]) == 2
    assert kostant_partition((-2,), [(2,)]) == 0


def test_kostant_a2_positive_roots():
    rs = build_root_system("A2")
    # alpha1 + alpha2 = theta: as {theta} or {alpha1, alpha2}
    assert kostant_partition((1, 1), rs.positive_roots) == 2


def test_kostant_unpointed():
    with pytest.raises(UnpointedParts):
        kostant_partition((0,), [(1,), (-1,)])


def _brute_partitions(mu, parts, bound=8):
    count = 0
    for coeffs in cartesian(range(bound + 1), repeat=len(parts)):
        if all(sum(c * p[i] for c, p in zip(coeffs, parts)) == mu[i] for i in range(len(mu))):
            count += 1
    return count


parts2 = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(any), min_size=1, max_size=3)


@given(parts2, st.tuples(st.integers(0, 5), st.integers(0, 5)))
def test_kostant_matches_brute_force(parts, mu):
    assert kostant_partition(mu, parts) == _brute_partitions(mu, parts)


@given(parts2, st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(any), st.tuples(st.integers(0, 5), st.integers(0, 5)))
def test_kostant_monotone(parts, extra, mu):
    assert kostant_partition(mu, parts + [extra]) >= kostant_partition(mu, parts)


def test_integration_factor_examples():
    x = MultiPoly.variable(1, 0)
    assert weyl_integration_factor(build_root_system("A1")) == 4 * x ** 2
    x1, x2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    assert weyl_integration_factor(build_root_system("A1xA1")) == 16 * x1 ** 2 * x2 ** 2


def test_integration_factor_a2_pointwise():
    rs = build_root_system("A2")
    factor = weyl_integration_factor(rs)
    assert factor.degree() == 6
    for point in [(1, 1), (2, -1), (3, 5)]:
        brute = 1
        for alpha in rs.positive_roots:
            brute *= sum(a * x for a, x in zip(alpha, point)) ** 2
        assert factor.evaluate(point) == brute
