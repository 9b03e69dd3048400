"""Compact Hamiltonian torus spaces described by isolated fixed-point data.

Sign conventions (fixed once, checked by the quantization tests):

* toric spaces: the tangent weights at a vertex are the primitive edge
  generators pointing *into* the polytope;
* coadjoint orbits: at the fixed point w(lam) the tangent weights are
  ``{-w(alpha) : alpha positive}``.

With the quantization contribution t^bundle * prod (1 - t^alpha)^-1 these
give sum_{j=0}^k t^j for the segment [0, k] and the Weyl character for the
orbit of lam.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from .errors import (
    FixedSubmanifold,
    InvalidParameter,
    NonIntegralVertex,
    NotDelzant,
    NotRegular,
    RankMismatch,
)
from .exactalg import MultiPoly, RatFun, ratfun_sum_normalize, to_fraction
from .lie import RootSystem, build_root_system, weyl_group


def _ivec(v) -> tuple:
    return tuple(int(x) for x in v)


def _qvec(v) -> tuple:
    return tuple(to_fraction(x) for x in v)


@dataclass(frozen=True)
class FixedPointDatum:
    label: str
    moment: tuple
    tangent_weights: tuple
    bundle_weight: tuple

    def __post_init__(self):
        object.__setattr__(self, "moment", _qvec(self.moment))
        object.__setattr__(self, "tangent_weights", tuple(_ivec(a) for a in self.tangent_weights))
        object.__setattr__(self, "bundle_weight", _ivec(self.bundle_weight))
        for a in self.tangent_weights:
            if not any(a):
                raise FixedSubmanifold(f"zero tangent weight at {self.label}")


@dataclass(frozen=True)
class HamiltonianSpace:
    rank: int
    half_dim: int
    points: tuple
    k_structure: RootSystem | None = None

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        for p in self.points:
            if len(p.moment) != self.rank or len(p.bundle_weight) != self.rank:
                raise RankMismatch(f"point {p.label} does not have rank {self.rank}")
            if len(p.tangent_weights) != self.half_dim:
                raise RankMismatch(f"point {p.label} has {len(p.tangent_weights)} weights, "
                                   f"expected {self.half_dim}")
            if any(len(a) != self.rank for a in p.tangent_weights):
                raise RankMismatch(f"tangent weight of wrong rank at {p.label}")
        if self.k_structure is not None and self.k_structure.rank != self.rank:
            raise RankMismatch("k_structure rank differs from torus rank")

    def moments(self) -> list:
        return [p.moment for p in self.points]

    def all_weights(self) -> list:
        return [a for p in self.points for a in p.tangent_weights]


@dataclass(frozen=True)
class DelzantPolytope:
    rank: int
    vertices: tuple
    vertex_edges: tuple = field(default=())

    def __post_init__(self):
        verts = tuple(_qvec(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if any(len(v) != self.rank for v in verts):
            raise RankMismatch("vertex of wrong rank")
        edges = self.vertex_edges or _derive_edges(self.rank, verts)
        edges = tuple(tuple(_primitive(e) for e in es) for es in edges)
        object.__setattr__(self, "vertex_edges", edges)
        if len(edges) != len(verts):
            raise InvalidParameter("one edge list per vertex is required")
        for v, es in zip(verts, edges):
            if len(es) != self.rank:
                raise NotDelzant(f"vertex {v} has {len(es)} edges, expected {self.rank}")
            if abs(_det(es)) != 1:
                raise NotDelzant(f"edge generators at {v} do not form a Z-basis")


def _primitive(v) -> tuple:
    v = _ivec(v)
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise InvalidParameter("zero edge generator")
    return tuple(x // g for x in v)


def _direction(frm, to) -> tuple:
    diff = [Fraction(b) - Fraction(a) for a, b in zip(frm, to)]
    den = 1
    for d in diff:
        den = den * d.denominator // gcd(den, d.denominator)
    return _primitive([int(d * den) for d in diff])


def _derive_edges(rank: int, verts) -> tuple:
    """Edge generators from vertex order: a segment, or a polygon listed cyclically."""
    if rank == 1:
        if len(verts) != 2 or verts[0] == verts[1]:
            raise InvalidParameter("a rank-1 polytope is a segment with two distinct vertices")
        return tuple(((1,),) if v == min(verts) else ((-1,),) for v in verts)
    if rank == 2:
        n = len(verts)
        if n < 3:
            raise InvalidParameter("a polygon needs at least three vertices")
        return tuple(
            (_direction(verts[i], verts[(i + 1) % n]), _direction(verts[i], verts[i - 1]))
            for i in range(n)
        )
    raise InvalidParameter("vertex_edges must be given explicitly in rank >= 3")


def _det(rows) -> int:
    rows = [list(r) for r in rows]
    n = len(rows)
    if n == 1:
        return rows[0][0]
    return sum((-1) ** j * rows[0][j] * _det([r[:j] + r[j + 1:] for r in rows[1:]]) for j in range(n))


def segment(a, b) -> DelzantPolytope:
    return DelzantPolytope(1, ((a,), (b,)))


def polygon(vertices) -> DelzantPolytope:
    return DelzantPolytope(2, tuple(vertices))


def build_toric(polytope: DelzantPolytope, k: int = 1) -> HamiltonianSpace:
    if int(k) != k or k < 1:
        raise InvalidParameter("level must be a positive integer")
    points = []
    for i, (v, edges) in enumerate(zip(polytope.vertices, polytope.vertex_edges)):
        scaled = tuple(k * x for x in v)
        if any(x.denominator != 1 for x in scaled):
            raise NonIntegralVertex(f"vertex {v} at level {k} is not a lattice point")
        points.append(FixedPointDatum(f"v{i}", scaled, edges, scaled))
    return HamiltonianSpace(polytope.rank, polytope.rank, points)


def build_coadjoint(rs: RootSystem, lam) -> HamiltonianSpace:
    """The orbit through a strictly dominant weight, fixed points W.lam."""
    lam = _ivec(lam)
    if len(lam) != rs.rank:
        raise RankMismatch("weight rank differs from root system rank")
    if not rs.is_regular_dominant(lam):
        raise NotRegular(f"{lam} is not strictly dominant")
    points = []
    for i, w in enumerate(weyl_group(rs)):
        image = w.act(lam)
        weights = tuple(tuple(-x for x in w.act(alpha)) for alpha in rs.positive_roots)
        points.append(FixedPointDatum(f"w{i}", image, weights, image))
    return HamiltonianSpace(rs.rank, len(rs.positive_roots), points, rs)


def build_orbit(rs: RootSystem, lam) -> HamiltonianSpace:
    """The orbit through any nonzero dominant weight (a partial flag manifold).

    Fixed points are the distinct images w(lam); the tangent weights at w(lam)
    are -w(alpha) over the positive roots with <lam, alpha^vee> > 0.
    """
    lam = _ivec(lam)
    if len(lam) != rs.rank:
        raise RankMismatch("weight rank differs from root system rank")
    if not rs.is_dominant(lam) or not any(lam):
        raise NotRegular(f"{lam} is not a nonzero dominant weight")
    moving = [a for a in rs.positive_roots if rs.coroot_pairing(lam, a) > 0]
    points, seen = [], set()
    for w in weyl_group(rs):
        image = w.act(lam)
        if image in seen:
            continue
        seen.add(image)
        weights = tuple(tuple(-x for x in w.act(alpha)) for alpha in moving)
        points.append(FixedPointDatum(f"w{len(points)}", image, weights, image))
    return HamiltonianSpace(rs.rank, len(moving), points, rs)


def point_space(rank: int, moment=None) -> HamiltonianSpace:
    moment = moment or (0,) * rank
    return HamiltonianSpace(rank, 0, (FixedPointDatum("pt", moment, (), moment),))


def product(a: HamiltonianSpace, b: HamiltonianSpace) -> HamiltonianSpace:
    if a.rank != b.rank:
        raise RankMismatch(f"rank {a.rank} vs {b.rank}")
    ks = a.k_structure if a.k_structure == b.k_structure else None
    if a.k_structure is not None and b.half_dim == 0 and b.k_structure is None:
        ks = a.k_structure
    if b.k_structure is not None and a.half_dim == 0 and a.k_structure is None:
        ks = b.k_structure
    points = []
    for p in a.points:
        for q in b.points:
            points.append(FixedPointDatum(
                f"{p.label}.{q.label}",
                tuple(x + y for x, y in zip(p.moment, q.moment)),
                p.tangent_weights + q.tangent_weights,
                tuple(x + y for x, y in zip(p.bundle_weight, q.bundle_weight)),
            ))
    return HamiltonianSpace(a.rank, a.half_dim + b.half_dim, points, ks)


def power(space: HamiltonianSpace, m: int) -> HamiltonianSpace:
    result = space
    for _ in range(m - 1):
        result = product(result, space)
    return result


def dualize(space: HamiltonianSpace) -> HamiltonianSpace:
    points = [
        FixedPointDatum(
            p.label,
            tuple(-x for x in p.moment),
            tuple(tuple(-x for x in a) for a in p.tangent_weights),
            tuple(-x for x in p.bundle_weight),
        )
        for p in space.points
    ]
    return HamiltonianSpace(space.rank, space.half_dim, points, space.k_structure)


def _lattice_index(matrix) -> int:
    """gcd of the maximal minors of an integer r' x r matrix."""
    rows = len(matrix)
    cols = len(matrix[0])
    g = 0
    for chosen in combinations(range(cols), rows):
        g = gcd(g, _det([[row[c] for c in chosen] for row in matrix]))
    return abs(g)


def restrict_subtorus(space: HamiltonianSpace, iota: Sequence[Sequence[int]]) -> HamiltonianSpace:
    iota = tuple(_ivec(row) for row in iota)
    if not iota or any(len(row) != space.rank for row in iota):
        raise RankMismatch(f"iota must have {space.rank} columns")
    if len(iota) > space.rank or _lattice_index(iota) != 1:
        raise InvalidParameter("iota is not surjective onto the sublattice")

    def push(v):
        return tuple(sum(row[j] * v[j] for j in range(space.rank)) for row in iota)

    points = []
    for p in space.points:
        weights = tuple(push(a) for a in p.tangent_weights)
        for a, image in zip(p.tangent_weights, weights):
            if not any(image):
                raise FixedSubmanifold(f"weight {a} at {p.label} maps to 0 under iota")
        points.append(FixedPointDatum(p.label, push(p.moment), weights, push(p.bundle_weight)))
    return HamiltonianSpace(len(iota), space.half_dim, points)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    checks: list  # (name, passed, witness)

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def __getitem__(self, name):
        for n, passed, witness in self.checks:
            if n == name:
                return passed
        raise KeyError(name)


def euler_sum(space: HamiltonianSpace) -> RatFun:
    one = MultiPoly.constant(space.rank, 1)
    return ratfun_sum_normalize([RatFun.from_parts(one, p.tangent_weights) for p in space.points])


def weyl_orbit_data(space: HamiltonianSpace, w) -> list:
    return sorted(
        (w.act_rational(p.moment), tuple(sorted(w.act(a) for a in p.tangent_weights)))
        for p in space.points
    )


def validate(space: HamiltonianSpace) -> ValidationReport:
    checks = []
    if space.half_dim >= 1:
        s = euler_sum(space)
        checks.append(("euler_sum_vanishing", s.is_zero(), "0" if s.is_zero() else str(s)))
    else:
        checks.append(("euler_sum_vanishing", True, "half_dim 0"))

    bad = [p.label for p in space.points if tuple(Fraction(x) for x in p.bundle_weight) != p.moment]
    checks.append(("prequantum_integrality", not bad,
                   "ok" if not bad else "bundle != moment at " + ",".join(bad)))

    if space.k_structure is not None:
        base = weyl_orbit_data(space, weyl_group(space.k_structure)[0])
        broken = [
            i for i, w in enumerate(weyl_group(space.k_structure))
            if weyl_orbit_data(space, w) != base
        ]
        checks.append(("weyl_symmetry", not broken,
                       "ok" if not broken else f"fails for Weyl elements {broken}"))
    return ValidationReport(checks)


def phi_positivity(space: HamiltonianSpace, bundle: Sequence) -> str:
    """Classify a line bundle (per-point weights) as 'strict', 'weak' or 'none'.

    At an isolated fixed point the form X -> <Phi(p), X><a_p, X> is positive
    semidefinite iff a_p = c_p Phi(p) with c_p >= 0 (or Phi(p) = 0).
    """
    if len(bundle) != len(space.points):
        raise InvalidParameter("one bundle weight per fixed point is required")
    strict = True
    for p, a in zip(space.points, bundle):
        a = _qvec(a)
        phi = p.moment
        if not any(phi):
            continue
        if not any(a):
            strict = False
            continue
        # a must be a positive multiple of phi
        i = next(j for j, x in enumerate(phi) if x)
        c = a[i] / phi[i]
        if c <= 0 or any(a[j] != c * phi[j] for j in range(len(phi))):
            return "none"
    return "strict" if strict else "weak"


def prequantum_bundle(space: HamiltonianSpace, k: int = 1) -> list:
    return [tuple(k * x for x in p.bundle_weight) for p in space.points]


def with_points(space: HamiltonianSpace, points) -> HamiltonianSpace:
    return HamiltonianSpace(space.rank, space.half_dim, tuple(points), space.k_structure)


def coadjoint(label: str, lam) -> HamiltonianSpace:
    return build_coadjoint(build_root_system(label), lam)
