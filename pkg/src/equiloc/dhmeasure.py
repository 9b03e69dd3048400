"""Duistermaat-Heckman measures as exact piecewise polynomials (rank <= 2).

The DH measure is assembled from beta-polarized cones: at each fixed point p
the weights with <alpha, beta> < 0 are flipped, and p contributes
(-1)^{#flips} times the convolution of Lebesgue measures along the polarized
weights, translated to Phi(p).  In rank 2 the density of such a convolution
on a sector between two consecutive generator rays is computed with the
recurrence

    (m - 2) T_G(x) = l_a(x) T_{G - g_a}(x) + l_b(x) T_{G - g_b}(x),
    x = l_a(x) g_a + l_b(x) g_b,

which follows from Euler's identity for the degree m-2 homogeneous function
T_G and from D_g T_G = T_{G - g}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from typing import Sequence

from . import _parallel
from .errors import (
    InvalidParameter,
    MissingKStructure,
    NotAWallPoint,
    OnWall,
    RankUnsupported,
    SingularMeasure,
)
from .exactalg import MultiPoly, polarize, to_fraction
from .exactalg.poly import exp_series_coefficient
from .geometry import HamiltonianSpace
from .lie import weyl_group


@dataclass(frozen=True)
class ConeContribution:
    apex: tuple
    generators: tuple
    sign: int


@dataclass(frozen=True)
class Wall:
    """Affine hyperplane <normal, xi> = offset with primitive integer normal.

    ``normal`` also spans the one-dimensional annihilator of the wall's
    direction space.
    """

    normal: tuple
    offset: Fraction

    def side(self, xi) -> int:
        v = sum(to_fraction(n) * to_fraction(x) for n, x in zip(self.normal, xi)) - self.offset
        return (v > 0) - (v < 0)


@dataclass(frozen=True)
class Chamber:
    sample: tuple
    signs: tuple
    density: MultiPoly


@dataclass(frozen=True)
class PiecewisePolyMeasure:
    rank: int
    walls: tuple
    chambers: tuple

    def locate(self, xi) -> Chamber:
        signs = tuple(w.side(xi) for w in self.walls)
        if 0 in signs:
            raise OnWall(f"{tuple(str(x) for x in xi)} lies on wall {self.walls[signs.index(0)]}")
        for c in self.chambers:
            if c.signs == signs:
                return c
        raise AssertionError(f"no chamber with signs {signs}")  # pragma: no cover

    def chambers_around(self, xi) -> list:
        """Chambers whose closure contains ``xi``."""
        signs = tuple(w.side(xi) for w in self.walls)
        return [
            c for c in self.chambers
            if all(s == 0 or s == cs for s, cs in zip(signs, c.signs))
        ]


# ---------------------------------------------------------------------------
# cones


def cone_contributions(space: HamiltonianSpace, beta) -> list:
    beta = tuple(int(b) for b in beta)
    if len(beta) != space.rank:
        raise InvalidParameter("beta rank differs from space rank")
    out = []
    for p in space.points:
        gens, _, sign = polarize(p.tangent_weights, beta)
        out.append(ConeContribution(p.moment, tuple(sorted(gens)), sign))
    return out


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _rank1_cone_density(gens: tuple) -> MultiPoly:
    """Density of the cone at apex 0 on its support side, as a polynomial in u."""
    m = len(gens)
    prod = 1
    for (c,) in gens:
        prod *= abs(c)
    u = MultiPoly.variable(1, 0)
    if gens[0][0] < 0:
        u = -u
    return u ** (m - 1) / (factorial(m - 1) * prod)


@lru_cache(maxsize=None)
def _sector_density(gens: tuple, ga: tuple, gb: tuple) -> MultiPoly:
    """T_G on the open sector strictly between rays ga (clockwise) and gb."""
    m = len(gens)
    det = _cross(ga, gb)
    if m == 2:
        return MultiPoly.constant(2, Fraction(1, abs(det)))
    # x = la * ga + lb * gb
    la = MultiPoly.linear_form((Fraction(gb[1], det), Fraction(-gb[0], det)))
    lb = MultiPoly.linear_form((Fraction(-ga[1], det), Fraction(ga[0], det)))
    probe = (ga[0] + gb[0], ga[1] + gb[1])  # a point inside the sector
    total = MultiPoly.zero(2)
    for g, coeff in ((ga, la), (gb, lb)):
        rest = list(gens)
        rest.remove(g)
        total = total + coeff * cone_density_rank2(tuple(rest), probe)
    return total / (m - 2)


def cone_density_rank2(gens: tuple, x0) -> MultiPoly:
    """Homogeneous polynomial equal to T_G near x0 (x0 off every generator ray)."""
    if len(gens) < 2:
        return MultiPoly.zero(2)
    x0 = tuple(to_fraction(v) for v in x0)
    if all(_cross(gens[0], g) == 0 for g in gens):
        return MultiPoly.zero(2)  # singular: supported on a ray
    cw = [g for g in gens if _cross(g, x0) > 0]
    ccw = [g for g in gens if _cross(x0, g) > 0]
    if not cw or not ccw:
        return MultiPoly.zero(2)
    # nearest ray on each side of x0 (the generators lie in a half-plane)
    ga = max(cw, key=_AngleKey)
    gb = min(ccw, key=_AngleKey)
    if _cross(ga, gb) <= 0 or _cross(x0, gb) <= 0 or _cross(ga, x0) <= 0:
        return MultiPoly.zero(2)  # x0 lies in the opposite cone
    return _sector_density(tuple(sorted(gens)), ga, gb)


class _AngleKey:
    """Orders vectors in a common open half-plane by angle, counter-clockwise."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return _cross(self.v, other.v) > 0

    def __eq__(self, other):
        return _cross(self.v, other.v) == 0


def _contribution_polynomial(c: ConeContribution, xi0) -> MultiPoly:
    """The cone's density near xi0 as a polynomial in xi."""
    rank = len(c.apex)
    u0 = tuple(to_fraction(x) - a for x, a in zip(xi0, c.apex))
    if rank == 1:
        if not c.generators:
            raise SingularMeasure("point mass: half-dimension smaller than rank")
        inside = u0[0] > 0 if c.generators[0][0] > 0 else u0[0] < 0
        if not inside:
            return MultiPoly.zero(1)
        return _rank1_cone_density(c.generators).shift(c.apex) * c.sign
    if len(c.generators) < 2:
        raise SingularMeasure("half-dimension smaller than rank")
    return cone_density_rank2(c.generators, u0).shift(c.apex) * c.sign


def _density_near(contributions, xi0) -> MultiPoly:
    rank = len(xi0)
    total = MultiPoly.zero(rank)
    for c in contributions:
        total = total + _contribution_polynomial(c, xi0)
    return total


# ---------------------------------------------------------------------------
# arrangements


def _primitive_normal(normal) -> tuple:
    normal = [to_fraction(x) for x in normal]
    den = 1
    for x in normal:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in normal]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def _make_wall(normal, point) -> Wall:
    n = _primitive_normal(normal)
    return Wall(n, sum((a * to_fraction(x) for a, x in zip(n, point)), Fraction(0)))


def candidate_walls(contributions) -> list:
    walls = set()
    for c in contributions:
        if len(c.apex) == 1:
            walls.add(_make_wall((1,), c.apex))
        else:
            for g in c.generators:
                walls.add(_make_wall((-g[1], g[0]), c.apex))
    return sorted(walls, key=lambda w: (w.normal, w.offset))


def chamber_samples(rank: int, walls: Sequence[Wall]) -> list:
    """One interior point per chamber of the arrangement, with sign vectors."""
    if rank == 1:
        cuts = sorted({w.offset * w.normal[0] for w in walls})
        if not cuts:
            points = [(Fraction(0),)]
        else:
            points = [(cuts[0] - 1,)]
            points += [((a + b) / 2,) for a, b in zip(cuts, cuts[1:])]
            points.append((cuts[-1] + 1,))
    else:
        points = _planar_samples(walls)
    seen = {}
    for p in points:
        signs = tuple(w.side(p) for w in walls)
        assert 0 not in signs
        seen.setdefault(signs, p)
    return [(p, s) for s, p in sorted(seen.items(), key=lambda kv: kv[1])]


def _intersection(w1: Wall, w2: Wall):
    (a, b), (c, d) = w1.normal, w2.normal
    det = a * d - b * c
    if det == 0:
        return None
    return ((w1.offset * d - b * w2.offset) / det, (a * w2.offset - c * w1.offset) / det)


def _planar_samples(walls) -> list:
    if not walls:
        return [(Fraction(0), Fraction(0))]
    xs = set()
    for w in walls:
        if w.normal[1] == 0:
            xs.add(w.offset / w.normal[0])
    for i, w1 in enumerate(walls):
        for w2 in walls[i + 1:]:
            p = _intersection(w1, w2)
            if p is not None:
                xs.add(p[0])
    xs = sorted(xs)
    if not xs:
        slabs = [Fraction(0)]
    else:
        slabs = [xs[0] - 1] + [(a + b) / 2 for a, b in zip(xs, xs[1:])] + [xs[-1] + 1]
    points = []
    for x in slabs:
        ys = sorted({(w.offset - w.normal[0] * x) / w.normal[1] for w in walls if w.normal[1]})
        if not ys:
            points.append((x, Fraction(0)))
            continue
        column = [ys[0] - 1] + [(a + b) / 2 for a, b in zip(ys, ys[1:])] + [ys[-1] + 1]
        points.extend((x, y) for y in column)
    return points


# ---------------------------------------------------------------------------
# public operations


def _check_rank(space: HamiltonianSpace) -> None:
    if space.rank > 2:
        raise RankUnsupported(f"DH measures are implemented for rank <= 2, got {space.rank}")
    if space.rank == 0:
        raise RankUnsupported("rank 0 has no DH density")
    if space.half_dim < space.rank:
        raise SingularMeasure("half-dimension smaller than rank: the DH measure has no density")


def _build_chambers(rank, contributions, walls) -> list:
    samples = chamber_samples(rank, walls)
    densities = _parallel.ordered_map(lambda s: _density_near(contributions, s[0]), samples)
    return [Chamber(p, s, d) for (p, s), d in zip(samples, densities)]


def dh_measure(space: HamiltonianSpace, beta) -> PiecewisePolyMeasure:
    _check_rank(space)
    contributions = cone_contributions(space, beta)
    walls = candidate_walls(contributions)
    chambers = _build_chambers(space.rank, contributions, walls)
    keep = []
    for i, w in enumerate(walls):
        by_signs = {c.signs: c.density for c in chambers}
        genuine = False
        for c in chambers:
            if c.signs[i] > 0:
                flipped = c.signs[:i] + (-1,) + c.signs[i + 1:]
                other = by_signs.get(flipped)
                if other is not None and other != c.density:
                    genuine = True
                    break
        if genuine:
            keep.append(w)
    if len(keep) != len(walls):
        chambers = _build_chambers(space.rank, contributions, keep)
    return PiecewisePolyMeasure(space.rank, tuple(keep), tuple(chambers))


def dh_density_at(measure: PiecewisePolyMeasure, xi) -> Fraction:
    xi = tuple(to_fraction(x) for x in xi)
    return measure.locate(xi).density.evaluate(xi)


def total_mass(measure: PiecewisePolyMeasure) -> Fraction:
    """Exact integral of the density over all bounded chambers.

    Unbounded chambers must carry the zero density.
    """
    total = Fraction(0)
    for c in measure.chambers:
        region = _chamber_region(measure, c)
        if region is None:
            if not c.density.is_zero():
                raise AssertionError(f"nonzero density on unbounded chamber {c.sample}")
            continue
        total += _integrate(c.density, region)
    return total


def _chamber_region(measure, chamber):
    if measure.rank == 1:
        x = chamber.sample[0]
        cuts = sorted(w.offset * w.normal[0] for w in measure.walls)
        lower = [v for v in cuts if v < x]
        upper = [v for v in cuts if v > x]
        if not lower or not upper:
            return None
        return (max(lower), min(upper))
    walls = measure.walls
    signs = chamber.signs
    for w, s in zip(walls, signs):
        for d in ((-w.normal[1], w.normal[0]), (w.normal[1], -w.normal[0])):
            if all(s2 * (w2.normal[0] * d[0] + w2.normal[1] * d[1]) >= 0 for w2, s2 in zip(walls, signs)):
                return None
    vertices = set()
    for i, w1 in enumerate(walls):
        for w2 in walls[i + 1:]:
            p = _intersection(w1, w2)
            if p is None:
                continue
            if all(s * _signed(w, p) >= 0 for w, s in zip(walls, signs)):
                vertices.add(p)
    cx = sum(v[0] for v in vertices) / len(vertices)
    cy = sum(v[1] for v in vertices) / len(vertices)
    return sorted(vertices, key=lambda v: _angle(v[0] - cx, v[1] - cy))


def _signed(w: Wall, p) -> Fraction:
    return w.normal[0] * p[0] + w.normal[1] * p[1] - w.offset


def _angle(x, y) -> float:
    import math

    return math.atan2(float(y), float(x))


def _integrate(poly: MultiPoly, region) -> Fraction:
    if poly.rank == 1:
        lo, hi = region
        total = Fraction(0)
        for (k,), c in poly.terms.items():
            total += c * (hi ** (k + 1) - lo ** (k + 1)) / (k + 1)
        return total
    total = Fraction(0)
    v0 = region[0]
    for v1, v2 in zip(region[1:], region[2:]):
        total += _integrate_triangle(poly, v0, v1, v2)
    return total


def _integrate_triangle(poly: MultiPoly, v0, v1, v2) -> Fraction:
    e1 = (v1[0] - v0[0], v1[1] - v0[1])
    e2 = (v2[0] - v0[0], v2[1] - v0[1])
    jac = abs(e1[0] * e2[1] - e1[1] * e2[0])
    u = MultiPoly.variable(2, 0)
    w = MultiPoly.variable(2, 1)
    pulled = poly.substitute([u * e1[0] + w * e2[0] + v0[0], u * e1[1] + w * e2[1] + v0[1]])
    total = Fraction(0)
    for (i, j), c in pulled.terms.items():
        total += c * Fraction(factorial(i) * factorial(j), factorial(i + j + 2))
    return total * jac


# ---------------------------------------------------------------------------
# wall crossing


def wall_jump(space: HamiltonianSpace, a, direction: int = 1) -> MultiPoly:
    """Jump I(a+) - I(a-) of the DH density across the wall point ``a``.

    Residue route: the coefficient of X^-1 in
    sum_{Phi(p) = a} exp((xi - a) X) / prod_i <alpha_i(p), X>.
    """
    if space.rank != 1:
        raise RankUnsupported("wall_jump needs a rank-1 space (restrict first)")
    a = to_fraction(a[0] if isinstance(a, (tuple, list)) else a)
    if direction not in (1, -1):
        raise InvalidParameter("direction must be +1 or -1")
    at_wall = [p for p in space.points if p.moment[0] == a]
    if not at_wall:
        raise NotAWallPoint(f"no fixed point maps to {a}")
    u = MultiPoly.variable(1, 0) - a
    total = MultiPoly.zero(1)
    for p in at_wall:
        m = len(p.tangent_weights)
        euler = 1
        for (alpha,) in p.tangent_weights:
            euler *= alpha
        # exp(uX) = sum_j u^j X^j / j!; the X^-1 term needs j = m - 1
        total = total + (u ** (m - 1)) * (exp_series_coefficient(1, m - 1) / euler)
    return total * direction


def chamber_difference(measure: PiecewisePolyMeasure, a, direction: int = 1) -> MultiPoly:
    """Convolution route: density polynomial past ``a`` minus the one before."""
    if measure.rank != 1:
        raise RankUnsupported("chamber_difference is implemented for rank 1")
    a = to_fraction(a[0] if isinstance(a, (tuple, list)) else a)
    signs_at = []
    index = None
    for i, w in enumerate(measure.walls):
        s = w.side((a,))
        if s == 0:
            index = i
        signs_at.append(s)
    if index is None:
        return MultiPoly.zero(1)
    by_signs = {c.signs: c.density for c in measure.chambers}
    plus = tuple(1 if i == index else s for i, s in enumerate(signs_at))
    minus = tuple(-1 if i == index else s for i, s in enumerate(signs_at))
    return (by_signs[plus] - by_signs[minus]) * direction


# ---------------------------------------------------------------------------
# nonabelian reduction


def _lattice_index(vectors, rank: int) -> int:
    """Index in Z^rank of the lattice spanned by ``vectors`` (0 if not full rank)."""
    from itertools import combinations

    g = 0
    for chosen in combinations(vectors, rank):
        g = gcd(g, abs(_det([list(v) for v in chosen])))
    return g


def _det(rows) -> int:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    return sum((-1) ** j * rows[0][j] * _det([r[:j] + r[j + 1:] for r in rows[1:]]) for j in range(n))


def generic_stabilizer_order(space: HamiltonianSpace) -> int:
    """Order of the central subgroup of K acting trivially on the space."""
    rs = space.k_structure
    vectors = sorted(set(rs.positive_roots) | {a for p in space.points for a in p.tangent_weights})
    return _lattice_index(vectors, space.rank)


def martin_constant(space: HamiltonianSpace) -> int:
    """(-1)^{|R+|} |S^K|: the Fourier sign of the Weyl factor and the central stabilizer."""
    rs = space.k_structure
    return (-1) ** len(rs.positive_roots) * generic_stabilizer_order(space)


def default_beta(space: HamiltonianSpace) -> tuple:
    from .exactalg.series import generic_direction

    return tuple(generic_direction(space.all_weights(), space.rank))


def nonabelian_reduced_integral(space: HamiltonianSpace, beta=None) -> Fraction:
    """Symplectic volume of Phi_K^-1(0)/K from the torus DH density near 0."""
    rs = space.k_structure
    if rs is None:
        raise MissingKStructure("the space carries no root-system structure")
    beta = tuple(beta) if beta is not None else default_beta(space)
    measure = dh_measure(space, beta)
    zero = (Fraction(0),) * space.rank
    pi = MultiPoly.constant(space.rank, 1)
    for alpha in rs.positive_roots:
        pi = pi * MultiPoly.linear_form(alpha)
    # Pi(d) f_T is the K-side density on the dominant chamber.  At a regular
    # value it is one polynomial near 0 there, vanishing on every Weyl wall.
    k_densities = {c.density.apply_differential(pi) for c in _dominant_chambers_at_zero(measure)}
    if len(k_densities) != 1:
        raise OnWall("0 is a singular value of the moment map")
    k_density = k_densities.pop()
    for alpha in rs.positive_roots:
        wall = [sum(rs.gram[i][j] * alpha[j] for j in range(rs.rank)) for i in range(rs.rank)]
        if k_density.divide_linear(wall) is None:
            raise OnWall("0 is a singular value of the moment map")
    value = k_density.apply_differential(pi).evaluate(zero)
    return Fraction(martin_constant(space), len(weyl_group(rs))) * value


def _dominant_chambers_at_zero(measure: PiecewisePolyMeasure) -> list:
    """Chambers meeting the open dominant cone arbitrarily close to 0."""
    zero = (Fraction(0),) * measure.rank
    through = [w for w in measure.walls if w.side(zero) == 0]
    if measure.rank == 1:
        directions = [(Fraction(1),)]
    else:
        # split the positive quadrant by the walls through 0
        rays = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
        for w in through:
            for d in ((-w.normal[1], w.normal[0]), (w.normal[1], -w.normal[0])):
                if d[0] > 0 and d[1] > 0:
                    rays.append((Fraction(d[0]), Fraction(d[1])))
        rays.sort(key=lambda d: d[1] / (d[0] + d[1]))
        directions = [(a[0] / (a[0] + a[1]) + b[0] / (b[0] + b[1]), a[1] / (a[0] + a[1]) + b[1] / (b[0] + b[1]))
                      for a, b in zip(rays, rays[1:]) if a != b]
    out = []
    for d in directions:
        signs = {w: w.side(d) for w in through}
        for c in measure.chambers_around(zero):
            if all(c.signs[measure.walls.index(w)] == s for w, s in signs.items()):
                if c not in out:
                    out.append(c)
    return out
