"""Formal characters: integer multiplicity functions on a weight lattice.

A character may carry a ``window``, a box ``((lo_1, hi_1), ..., (lo_r, hi_r))``
inside which its multiplicities are certified; outside the window nothing is
claimed.  ``window=None`` means the character is finitely supported and known
everywhere.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ..errors import NonGenericPolarization, RankMismatch


def _vec(v) -> tuple:
    return tuple(int(x) for x in v)


def normalize_window(window) -> tuple | None:
    if window is None:
        return None
    out = []
    for lo, hi in window:
        lo, hi = int(lo), int(hi)
        if lo > hi:
            raise ValueError(f"empty window range [{lo}, {hi}]")
        out.append((lo, hi))
    return tuple(out)


def in_window(weight, window) -> bool:
    return all(lo <= w <= hi for w, (lo, hi) in zip(weight, window))


def window_points(window) -> list:
    points = [()]
    for lo, hi in window:
        points = [p + (x,) for p in points for x in range(lo, hi + 1)]
    return points


def intersect_windows(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return normalize_window(
        (max(l1, l2), min(h1, h2)) for (l1, h1), (l2, h2) in zip(a, b)
    )


class Character:
    __slots__ = ("rank", "_mults", "window")

    def __init__(self, rank: int, multiplicities=None, window=None):
        self.rank = rank
        self.window = normalize_window(window)
        if self.window is not None and len(self.window) != rank:
            raise RankMismatch("window rank differs from character rank")
        mults = {}
        for w, m in dict(multiplicities or {}).items():
            w = _vec(w)
            if len(w) != rank:
                raise RankMismatch(f"weight {w} does not have rank {rank}")
            m = int(m)
            if m and (self.window is None or in_window(w, self.window)):
                mults[w] = mults.get(w, 0) + m
                if not mults[w]:
                    del mults[w]
        self._mults = mults

    @classmethod
    def monomial(cls, weight, multiplicity: int = 1, window=None) -> Character:
        weight = _vec(weight)
        return cls(len(weight), {weight: multiplicity}, window)

    @property
    def multiplicities(self) -> dict:
        return dict(self._mults)

    def __getitem__(self, weight) -> int:
        return self._mults.get(_vec(weight), 0)

    def items(self):
        return sorted(self._mults.items())

    def support(self) -> list:
        return sorted(self._mults)

    def dimension(self) -> int:
        return sum(self._mults.values())

    def __len__(self):
        return len(self._mults)

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        return (self.rank, self._mults, self.window) == (other.rank, other._mults, other.window)

    def same_multiplicities(self, other: Character) -> bool:
        return self.rank == other.rank and self._mults == other._mults

    def __repr__(self):
        return f"Character({self.rank}, {dict(self.items())}, window={self.window})"

    def __add__(self, other: Character) -> Character:
        if self.rank != other.rank:
            raise RankMismatch("character ranks differ")
        window = intersect_windows(self.window, other.window)
        mults = dict(self._mults)
        for w, m in other._mults.items():
            mults[w] = mults.get(w, 0) + m
        return Character(self.rank, mults, window)

    def __neg__(self) -> Character:
        return Character(self.rank, {w: -m for w, m in self._mults.items()}, self.window)

    def __sub__(self, other: Character) -> Character:
        return self + (-other)

    def scale(self, c: int) -> Character:
        return Character(self.rank, {w: c * m for w, m in self._mults.items()}, self.window)

    def __mul__(self, other: Character) -> Character:
        """Character product (convolution of multiplicity functions).

        Only defined for finitely supported characters.
        """
        if self.window is not None or other.window is not None:
            raise ValueError("products need finitely supported (window-free) characters")
        if self.rank != other.rank:
            raise RankMismatch("character ranks differ")
        mults: dict = {}
        for w1, m1 in self._mults.items():
            for w2, m2 in other._mults.items():
                w = tuple(a + b for a, b in zip(w1, w2))
                mults[w] = mults.get(w, 0) + m1 * m2
        return Character(self.rank, mults)

    def restrict(self, window) -> Character:
        return Character(self.rank, self._mults, intersect_windows(self.window, window))

    def forget_window(self) -> Character:
        return Character(self.rank, self._mults)

    def negate_weights(self) -> Character:
        window = None
        if self.window is not None:
            window = tuple((-hi, -lo) for lo, hi in self.window)
        return Character(self.rank, {tuple(-x for x in w): m for w, m in self._mults.items()}, window)

    def map_weights(self, matrix: Sequence[Sequence[int]]) -> Character:
        """Push forward along an integer linear map (no window)."""
        mults: dict = {}
        for w, m in self._mults.items():
            image = tuple(sum(row[j] * w[j] for j in range(self.rank)) for row in matrix)
            mults[image] = mults.get(image, 0) + m
        return Character(len(matrix), mults)


def _pair(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def polarize(weights: Iterable, beta) -> tuple[list, list, int]:
    """Flip weights so every generator pairs positively with ``beta``.

    Returns ``(generators, flipped, sign)`` where ``flipped`` lists the
    original weights that were negated and ``sign = (-1)^len(flipped)``.
    """
    gens, flipped = [], []
    for alpha in weights:
        alpha = _vec(alpha)
        s = _pair(alpha, beta)
        if s == 0:
            raise NonGenericPolarization(f"weight {alpha} is orthogonal to beta={tuple(beta)}")
        if s > 0:
            gens.append(alpha)
        else:
            gens.append(tuple(-a for a in alpha))
            flipped.append(alpha)
    return gens, flipped, (-1) ** len(flipped)


def geometric_expand(apex, weights, beta, window) -> Character:
    """Window truncation of t^apex * prod_i (1 - t^alpha_i)^-1, beta-polarized.

    The expansion is the one whose support is bounded below along ``beta``: factors with
    <alpha, beta> > 0 expand as sum_n t^(n alpha); factors with
    <alpha, beta> < 0 are rewritten -t^(-alpha) / (1 - t^(-alpha)) and expand
    as -sum_{n>=1} t^(-n alpha).
    """
    apex = _vec(apex)
    beta = _vec(beta)
    rank = len(apex)
    window = normalize_window(window)
    if len(beta) != rank or len(window) != rank:
        raise RankMismatch("apex, beta and window must share one rank")
    gens, flipped, sign = polarize(weights, beta)
    for alpha in gens:
        if len(alpha) != rank:
            raise RankMismatch(f"weight {alpha} does not have rank {rank}")

    start = tuple(a - sum(f[i] for f in flipped) for i, a in enumerate(apex))
    # every generator raises <., beta>, so terms above the window's beta-height
    # can never come back into the window
    ceiling = sum(max(beta[i] * lo, beta[i] * hi) for i, (lo, hi) in enumerate(window))
    terms = {start: sign} if _pair(start, beta) <= ceiling else {}
    for g in gens:
        step = _pair(g, beta)
        grown: dict = {}
        for w, m in terms.items():
            height = _pair(w, beta)
            x = w
            while height <= ceiling:
                grown[x] = grown.get(x, 0) + m
                x = tuple(a + b for a, b in zip(x, g))
                height += step
        terms = {w: m for w, m in grown.items() if m}
    return Character(rank, terms, window)
