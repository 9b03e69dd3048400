"""Root systems of rank <= 3, Weyl groups, characters and partition functions.

Coordinates
-----------
Every weight is written in the basis of fundamental weights (Dynkin labels),
so the weight lattice is Z^r, a weight is dominant iff all coordinates are
>= 0, rho = (1, ..., 1), and simple root alpha_i is row i of the Cartan
matrix A with A[i][j] = <alpha_i, alpha_j^vee>.  The invariant inner product
is normalized so that short roots have squared length 2; in these coordinates
its Gram matrix is A^-1 D with D = diag(|alpha_j|^2 / 2).

=========  =================================  =====================
label      Cartan matrix rows (simple roots)  squared root lengths
=========  =================================  =====================
A1         (2)                                2
A1xA1      (2, 0), (0, 2)                     2, 2
A2         (2, -1), (-1, 2)                   2, 2
B2         (2, -2), (-1, 2)                   4 (long), 2 (short)
A3         (2,-1,0), (-1,2,-1), (0,-1,2)      2, 2, 2
=========  =================================  =====================

Elements of Z^r pair with these weights through the plain dot product; that
is the pairing used for polarizations and for the polynomial ring on t.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian

from .errors import NotDominant, NotWeylSymmetric, UnpointedParts, UnsupportedType
from .exactalg import Character, MultiPoly
from .exactalg.poly import solve_linear_system

CARTAN = {
    "A1": ((2,),),
    "A1xA1": ((2, 0), (0, 2)),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((2, -2), (-1, 2)),
    "A3": ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
}
ROOT_LENGTHS = {
    "A1": (2,),
    "A1xA1": (2, 2),
    "A2": (2, 2),
    "B2": (4, 2),
    "A3": (2, 2, 2),
}
ALIASES = {"A1×A1": "A1xA1", "A1*A1": "A1xA1"}


@dataclass(frozen=True)
class WeylElement:
    matrix: tuple  # rows; acts on weight coordinates as column vectors
    sign: int

    def act(self, weight) -> tuple:
        return tuple(sum(row[j] * weight[j] for j in range(len(weight))) for row in self.matrix)

    def act_rational(self, weight) -> tuple:
        return tuple(
            sum(Fraction(row[j]) * weight[j] for j in range(len(weight))) for row in self.matrix
        )


@dataclass(frozen=True)
class RootSystem:
    label: str
    rank: int
    simple_roots: tuple
    positive_roots: tuple
    rho: tuple
    fundamental_weights: tuple
    gram: tuple  # inner products of fundamental weights

    def inner(self, u, v) -> Fraction:
        return sum(
            (Fraction(u[i]) * self.gram[i][j] * v[j] for i in range(self.rank) for j in range(self.rank)),
            Fraction(0),
        )

    def coroot_pairing(self, weight, root) -> Fraction:
        return 2 * self.inner(weight, root) / self.inner(root, root)

    def simple_root_coordinates(self, weight) -> tuple:
        """Coefficients c with weight = sum c_i alpha_i."""
        a = self.simple_roots
        # weight_j = sum_i c_i a[i][j]; solve A^T c = weight
        transpose = [[a[i][j] for i in range(self.rank)] for j in range(self.rank)]
        return tuple(solve_linear_system(transpose, list(weight)))

    def height(self, weight) -> Fraction:
        return sum(self.simple_root_coordinates(weight), Fraction(0))

    def is_dominant(self, weight) -> bool:
        return all(x >= 0 for x in weight)

    def is_regular_dominant(self, weight) -> bool:
        return all(x > 0 for x in weight)


def _normalize_label(label: str) -> str:
    label = ALIASES.get(label, label)
    if label not in CARTAN:
        raise UnsupportedType(f"unsupported root system {label!r}; expected one of {sorted(CARTAN)}")
    return label


@lru_cache(maxsize=None)
def build_root_system(label: str) -> RootSystem:
    label = _normalize_label(label)
    cartan = CARTAN[label]
    r = len(cartan)
    simple = tuple(tuple(row) for row in cartan)
    half = [Fraction(n, 2) for n in ROOT_LENGTHS[label]]
    # A G = D  =>  G = A^-1 D, solved column by column
    gram_cols = []
    for j in range(r):
        rhs = [half[j] if i == j else Fraction(0) for i in range(r)]
        gram_cols.append(solve_linear_system([list(row) for row in cartan], rhs))
    gram = tuple(tuple(gram_cols[j][i] for j in range(r)) for i in range(r))

    # positive roots: closure of the simple roots under simple reflections,
    # keeping those with nonnegative simple-root coordinates
    reflections = [_simple_reflection(simple, i) for i in range(r)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for root in frontier:
            for s in reflections:
                image = _apply(s, root)
                if image not in roots:
                    roots.add(image)
                    nxt.append(image)
        frontier = nxt
    rs = RootSystem(label, r, simple, (), tuple([1] * r), _identity(r), gram)
    positive = tuple(sorted(
        (x for x in roots if all(c >= 0 for c in rs.simple_root_coordinates(x))),
        key=lambda x: (rs.height(x), x),
    ))
    rs = RootSystem(label, r, simple, positive, tuple([1] * r), _identity(r), gram)
    _check_root_system(rs)
    return rs


def _identity(r: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))


def _simple_reflection(simple, i: int) -> tuple:
    # s_i(lambda) = lambda - lambda_i * alpha_i
    r = len(simple)
    return tuple(
        tuple((1 if a == b else 0) - (simple[i][a] if b == i else 0) for b in range(r))
        for a in range(r)
    )


def _apply(matrix, v) -> tuple:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in matrix)


def _matmul(a, b) -> tuple:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _det(m) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return sum(
        (-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(n)
    )


def _check_root_system(rs: RootSystem) -> None:
    rho2 = tuple(sum(root[i] for root in rs.positive_roots) for i in range(rs.rank))
    assert rho2 == tuple(2 * x for x in rs.rho), "rho is not half the sum of positive roots"
    positive = set(rs.positive_roots)
    for i, alpha in enumerate(rs.simple_roots):
        s = _simple_reflection(rs.simple_roots, i)
        others = positive - {alpha}
        assert {_apply(s, x) for x in others} == others, "simple reflection does not permute R+"
    for w in weyl_group(rs):
        for u in rs.simple_roots:
            for v in rs.simple_roots:
                assert rs.inner(w.act(u), w.act(v)) == rs.inner(u, v)


@lru_cache(maxsize=None)
def _weyl_group_cached(label: str) -> tuple:
    rs_simple = CARTAN[label]
    r = len(rs_simple)
    gens = [_simple_reflection(rs_simple, i) for i in range(r)]
    ident = _identity(r)
    seen = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for s in gens:
                p = _matmul(s, m)
                if p not in seen:
                    seen.add(p)
                    order.append(p)
                    nxt.append(p)
        frontier = nxt
    return tuple(WeylElement(m, _det(m)) for m in order)


def weyl_group(rs: RootSystem) -> list:
    """All Weyl group elements, identity first, in breadth-first word order."""
    return list(_weyl_group_cached(rs.label))


def check_dominant(rs: RootSystem, weight) -> tuple:
    weight = tuple(int(x) for x in weight)
    if len(weight) != rs.rank:
        raise NotDominant(f"weight {weight} does not have rank {rs.rank}")
    if not rs.is_dominant(weight):
        raise NotDominant(f"{weight} is not dominant")
    return weight


def kostant_partition(mu, parts) -> int:
    """Number of ways to write ``mu`` as a nonnegative integer combination of ``parts``."""
    parts = tuple(sorted(tuple(int(x) for x in p) for p in parts))
    mu = tuple(int(x) for x in mu)
    if any(not any(p) for p in parts):
        raise UnpointedParts("zero vector among the parts")
    functional = pointing_functional(parts) if parts else None
    return _partition_count(mu, parts, functional)


def _partition_count(mu, parts, functional) -> int:
    if not parts:
        return 1 if not any(mu) else 0
    return _partition_counter(parts, functional)(mu, 0)


@lru_cache(maxsize=64)
def _partition_counter(parts, functional):
    steps = tuple(sum(f * x for f, x in zip(functional, p)) for p in parts)

    @lru_cache(maxsize=None)
    def count(target, i):
        if i == len(parts):
            return 1 if not any(target) else 0
        level = sum(f * x for f, x in zip(functional, target))
        if level < 0:
            return 0
        total = 0
        p = parts[i]
        n = 0
        while n * steps[i] <= level:
            total += count(tuple(t - n * x for t, x in zip(target, p)), i + 1)
            n += 1
        return total

    return count


def pointing_functional(parts) -> tuple:
    """An exact rational y with <y, p> >= 1 for every part, or UnpointedParts.

    Fourier-Motzkin elimination; ranks here are at most 3.
    """
    rank = len(parts[0])
    rows = [(tuple(Fraction(x) for x in p), Fraction(1)) for p in parts]
    y = _fm_solve(rows, rank)
    if y is None:
        raise UnpointedParts(f"parts {list(parts)} do not lie in an open half-space")
    return y


def _fm_solve(rows, nvars):
    """Find y with a.y >= b for all (a, b) in rows, or None."""
    if nvars == 0:
        return () if all(b <= 0 for _, b in rows) else None
    last = nvars - 1
    pos, neg, zero = [], [], []
    for a, b in rows:
        (pos if a[last] > 0 else neg if a[last] < 0 else zero).append((a, b))
    reduced = [(a[:last], b) for a, b in zero]
    for ap, bp in pos:
        for an, bn in neg:
            # combine so the last variable cancels
            cp, cn = -an[last], ap[last]
            reduced.append((tuple(cp * x + cn * z for x, z in zip(ap[:last], an[:last])), cp * bp + cn * bn))
    head = _fm_solve(reduced, last)
    if head is None:
        return None
    lower, upper = None, None
    for a, b in pos + neg:
        rest = sum((x * h for x, h in zip(a[:last], head)), Fraction(0))
        bound = (b - rest) / a[last]
        if a[last] > 0:
            lower = bound if lower is None else max(lower, bound)
        else:
            upper = bound if upper is None else min(upper, bound)
    if lower is not None and upper is not None and lower > upper:
        return None
    if lower is None and upper is None:
        value = Fraction(0)
    elif lower is None:
        value = upper
    elif upper is None:
        value = lower
    else:
        value = (lower + upper) / 2
    return head + (value,)


def _weight_candidates(rs: RootSystem, lam) -> list:
    """Weights lam - sum c_i alpha_i with c bounded by lam - w0 lam."""
    lowest = min(
        (w.act(lam) for w in weyl_group(rs)), key=lambda v: rs.height(v)
    )
    bound = [int(c) for c in rs.simple_root_coordinates(tuple(a - b for a, b in zip(lam, lowest)))]
    out = []
    for c in cartesian(*(range(b + 1) for b in bound)):
        mu = tuple(
            lam[j] - sum(c[i] * rs.simple_roots[i][j] for i in range(rs.rank)) for j in range(rs.rank)
        )
        out.append(mu)
    return out


def weyl_character(rs: RootSystem, lam) -> Character:
    """Character of the irreducible representation of highest weight ``lam``.

    Alternating-sum formula in Kostant's form:
    m(mu) = sum_w det(w) P(w(lam + rho) - (mu + rho)), P the partition function
    of the positive roots.
    """
    lam = check_dominant(rs, lam)
    shifted = tuple(a + b for a, b in zip(lam, rs.rho))
    group = weyl_group(rs)
    functional = pointing_functional(rs.positive_roots)
    mults = {}
    for mu in _weight_candidates(rs, lam):
        base = tuple(a + b for a, b in zip(mu, rs.rho))
        m = 0
        for w in group:
            target = tuple(a - b for a, b in zip(w.act(shifted), base))
            m += w.sign * _partition_count(target, rs.positive_roots, functional)
        if m:
            mults[mu] = m
    return Character(rs.rank, mults)


def weyl_dimension(rs: RootSystem, lam) -> int:
    lam = check_dominant(rs, lam)
    shifted = tuple(a + b for a, b in zip(lam, rs.rho))
    value = Fraction(1)
    for alpha in rs.positive_roots:
        value *= rs.inner(shifted, alpha) / rs.inner(rs.rho, alpha)
    assert value.denominator == 1
    return int(value)


def is_weyl_symmetric(rs: RootSystem, chi: Character) -> bool:
    for i in range(rs.rank):
        s = _simple_reflection(rs.simple_roots, i)
        for w, m in chi.items():
            if chi[_apply(s, w)] != m:
                return False
    return True


def decompose_character(rs: RootSystem, chi: Character) -> list:
    """Greedy highest-weight stripping into irreducible characters.

    Returns ``[(highest weight, multiplicity), ...]`` in stripping order.
    """
    if chi.window is not None:
        raise ValueError("decomposition needs a finitely supported character")
    if not is_weyl_symmetric(rs, chi):
        raise NotWeylSymmetric("character is not invariant under the Weyl group")
    remaining = chi
    out = []
    while len(remaining):
        dominant = [w for w, m in remaining.items() if rs.is_dominant(w)]
        top = max(dominant, key=lambda w: (rs.height(w), sum(w), w))
        m = remaining[top]
        out.append((top, m))
        remaining = remaining - weyl_character(rs, top).scale(m)
    return out


def weyl_integration_factor(rs: RootSystem) -> MultiPoly:
    """prod over positive roots of <alpha, X>^2."""
    result = MultiPoly.constant(rs.rank, 1)
    for alpha in rs.positive_roots:
        result = result * MultiPoly.linear_form(alpha) ** 2
    return result


def dominant_weights_in_box(rs: RootSystem, upper) -> list:
    """Dominant weights with 0 <= coordinate_i <= upper_i."""
    return [tuple(c) for c in cartesian(*(range(int(u) + 1) for u in upper))]
