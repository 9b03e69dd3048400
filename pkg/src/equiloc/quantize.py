"""Equivariant Riemann-Roch characters and [Q,R]=0 checks.

Each fixed point p contributes t^{k a_p} * prod_i (1 - t^{alpha_i(p)})^-1,
expanded with support bounded below along beta.  Characters are always
window-truncated; callers that need a finitely supported answer get one
only after a window-stability check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import _parallel
from .errors import InvalidParameter, MissingKStructure, NotWeylSymmetric, ValidationFailed
from .exactalg import Character, geometric_expand, polarize
from .exactalg.character import in_window, normalize_window, window_points
from .exactalg.series import generic_direction
from .geometry import DelzantPolytope, HamiltonianSpace, build_coadjoint, build_toric
from .lie import (
    RootSystem,
    check_dominant,
    decompose_character,
    dominant_weights_in_box,
    is_weyl_symmetric,
    kostant_partition,
    weyl_group,
)


@dataclass(frozen=True)
class TwistData:
    """Per-point integral weights added to the (scaled) bundle weight."""

    weights: Mapping  # point label -> weight

    def at(self, label: str, rank: int) -> tuple:
        return tuple(int(x) for x in self.weights.get(label, (0,) * rank))


@dataclass(frozen=True)
class QRRow:
    weight: tuple
    from_character: int
    from_reduction: int
    model: tuple | None = None

    @property
    def agree(self) -> bool:
        return self.from_character == self.from_reduction


@dataclass(frozen=True)
class QRReport:
    rows: tuple

    @property
    def all_agree(self) -> bool:
        return all(r.agree for r in self.rows)

    def disagreements(self) -> list:
        return [r for r in self.rows if not r.agree]


def default_beta(space: HamiltonianSpace) -> tuple:
    return tuple(generic_direction(space.all_weights(), space.rank))


def rr_character(
    space: HamiltonianSpace,
    k: int = 1,
    beta=None,
    window=None,
    twist: TwistData | None = None,
) -> Character:
    if window is None:
        raise InvalidParameter("rr_character needs a finite window")
    window = normalize_window(window)
    beta = tuple(beta) if beta is not None else default_beta(space)

    def contribution(p):
        shift = twist.at(p.label, space.rank) if twist else (0,) * space.rank
        apex = tuple(int(k * b) + s for b, s in zip(p.bundle_weight, shift))
        return geometric_expand(apex, p.tangent_weights, beta, window)

    total = Character(space.rank, {}, window)
    for c in _parallel.ordered_map(contribution, space.points):
        total = total + c
    return total


def support_box(space: HamiltonianSpace, k: int = 1, twist: TwistData | None = None, pad: int = 0):
    """Bounding box of the shifted bundle weights, padded by ``pad``."""
    apexes = []
    for p in space.points:
        shift = twist.at(p.label, space.rank) if twist else (0,) * space.rank
        apexes.append(tuple(int(k * b) + s for b, s in zip(p.bundle_weight, shift)))
    return tuple(
        (min(a[i] for a in apexes) - pad, max(a[i] for a in apexes) + pad)
        for i in range(space.rank)
    )


def certified_character(space: HamiltonianSpace, k: int = 1, beta=None,
                        twist: TwistData | None = None) -> Character:
    """Finitely supported character, certified by window stability.

    The index is supported in the hull of the apexes; the box around them is
    recomputed one step larger and must agree, and must be empty on the
    padding ring.
    """
    box = support_box(space, k, twist, pad=1)
    inner = rr_character(space, k, beta, box, twist)
    outer = rr_character(space, k, beta, support_box(space, k, twist, pad=2), twist)
    if outer.restrict(box).multiplicities != inner.multiplicities:
        raise ValidationFailed("character is not window-stable")
    core = support_box(space, k, twist)
    if any(not in_window(w, core) for w in outer.support()):
        raise ValidationFailed("character has support outside the apex hull")
    return inner.forget_window()


# ---------------------------------------------------------------------------
# toric


def _in_polytope(point, polytope: DelzantPolytope, k: int) -> bool:
    verts = [tuple(k * x for x in v) for v in polytope.vertices]
    if polytope.rank == 1:
        lo, hi = sorted(v[0] for v in verts)
        return lo <= point[0] <= hi
    if polytope.rank != 2:
        raise InvalidParameter("lattice enumeration is implemented for rank <= 2")
    sides = set()
    for a, b in zip(verts, verts[1:] + verts[:1]):
        cross = (b[0] - a[0]) * (point[1] - a[1]) - (b[1] - a[1]) * (point[0] - a[0])
        sides.add((cross > 0) - (cross < 0))
    return not (1 in sides and -1 in sides)


def polytope_box(polytope: DelzantPolytope, k: int = 1, pad: int = 0):
    box = []
    for i in range(polytope.rank):
        xs = [k * v[i] for v in polytope.vertices]
        lo, hi = min(xs), max(xs)
        box.append((int(lo.__floor__()) - pad, int(hi.__ceil__()) + pad))
    return tuple(box)


def lattice_multiplicities(polytope: DelzantPolytope, k: int = 1) -> Character:
    box = polytope_box(polytope, k)
    return Character(
        polytope.rank, {w: 1 for w in window_points(box) if _in_polytope(w, polytope, k)}
    )


def qr_report_toric(polytope: DelzantPolytope, k: int = 1, beta=None) -> QRReport:
    space = build_toric(polytope, k)
    window = polytope_box(polytope, k, pad=1)
    chi = rr_character(space, 1, beta, window)
    lattice = lattice_multiplicities(polytope, k)
    rows = tuple(QRRow(w, chi[w], lattice[w]) for w in window_points(window))
    return QRReport(rows)


# ---------------------------------------------------------------------------
# nonabelian


def k_multiplicities(space: HamiltonianSpace, k: int = 1, window=None, beta=None) -> list:
    """Multiplicities of the irreducibles V_mu in the quantization of ``space``.

    ``window`` bounds the dominant weights reported (None keeps all).
    """
    rs = space.k_structure
    if rs is None:
        raise MissingKStructure("the space carries no root-system structure")
    chi = certified_character(space, k, beta)
    if not is_weyl_symmetric(rs, chi):
        raise NotWeylSymmetric("the quantized character is not Weyl-symmetric")
    parts = decompose_character(rs, chi)
    if window is None:
        return parts
    window = normalize_window(window)
    return [(lam, m) for lam, m in parts if in_window(lam, window)]


def spinc_twist(rs: RootSystem, space: HamiltonianSpace) -> TwistData:
    """Replace the bundle weight w(mu + rho) by w(mu) at each point."""
    twist = {}
    for w, p in zip(weyl_group(rs), space.points):
        twist[p.label] = tuple(-x for x in w.act(rs.rho))
    return TwistData(twist)


def _shift(mu, rho) -> tuple:
    return tuple(m + r for m, r in zip(mu, rho))


def spinc_quantize_flag(rs: RootSystem, mu, beta=None) -> Character:
    mu = check_dominant(rs, mu)
    lam = _shift(mu, rs.rho)
    space = build_coadjoint(rs, lam)
    return certified_character(space, 1, beta, spinc_twist(rs, space))


def qr_report_spinc_flag(rs: RootSystem, upper, models=None) -> QRReport:
    """Spin-c [Q,R] check on the flag models K.(mu' + rho).

    ``upper`` bounds the dominant weights mu examined; ``models`` lists the
    mu' whose orbits are quantized (default: every dominant weight in the box).
    """
    targets = dominant_weights_in_box(rs, upper)
    models = [check_dominant(rs, m) for m in models] if models is not None else targets
    rows = []
    for model in models:
        counts = dict(decompose_character(rs, spinc_quantize_flag(rs, model)))
        # the reduced space at mu + rho is a point when mu + rho is a moment
        # image of the orbit (it can only be the dominant one), else empty
        moments = {p.moment for p in build_coadjoint(rs, _shift(model, rs.rho)).points}
        for mu in targets:
            reduced = int(tuple(Fraction(x) for x in _shift(mu, rs.rho)) in moments)
            rows.append(QRRow(mu, counts.get(mu, 0), reduced, model))
    return QRReport(tuple(rows))


# ---------------------------------------------------------------------------
# SL(2, R) discrete series


def blattner_sl2(lam: int, J: int) -> tuple[Character, Character]:
    """K-type multiplicities of the holomorphic discrete series with parameter lam.

    Returns the Blattner character and the reduced-space count, both on the
    SO(2)-weight window [-(lam+1+2J), lam+1+2J].
    """
    if int(lam) != lam or lam < 1:
        raise InvalidParameter("the Harish-Chandra parameter must be an integer >= 1")
    if int(J) != J or J < 0:
        raise InvalidParameter("window size must be a nonnegative integer")
    top = lam + 1 + 2 * J
    window = ((-top, top),)
    lowest = lam + 1  # lam + rho_n with the noncompact root of weight 2
    blattner, reduced = {}, {}
    for mu in range(-top, top + 1):
        blattner[(mu,)] = kostant_partition((mu - lowest,), [(2,)])
        reduced[(mu,)] = int(mu >= lowest and (mu - lowest) % 2 == 0)
    return Character(1, blattner, window), Character(1, reduced, window)


# ---------------------------------------------------------------------------
# vanishing


def _representable(target: int, steps: Sequence[int]) -> bool:
    reachable = [False] * (target + 1)
    reachable[0] = True
    for s in steps:
        for v in range(s, target + 1):
            reachable[v] = reachable[v] or reachable[v - s]
    return reachable[target]


def e_beta_vanishing(space: HamiltonianSpace, bundle: Sequence, beta) -> bool:
    """True iff no fixed-point expansion has a beta-invariant term."""
    if len(bundle) != len(space.points):
        raise InvalidParameter("one bundle weight per fixed point is required")
    beta = tuple(int(b) for b in beta)
    if not any(beta):
        raise InvalidParameter("beta must be nonzero")
    for p, a in zip(space.points, bundle):
        gens, flipped, _ = polarize(p.tangent_weights, beta)
        start = [Fraction(x) - sum(f[i] for f in flipped) for i, x in enumerate(a)]
        height = sum(s * b for s, b in zip(start, beta))
        if height > 0 or height.denominator != 1:
            continue
        steps = [sum(g[i] * beta[i] for i in range(len(beta))) for g in gens]
        if _representable(int(-height), steps):
            return False
    return True
