"""Nilpotent dyadic tiles: digit sets, enumeration, ancestry, descriptions.

A discrete dyadic tile of level ``l`` at base ``g`` (coordinates
divisible by 2^l) is the product set g*A_l*...*A_1 with digit sets
A_i = {0, 2^(i-1)}^n.  All operations require a law with integer
polynomial coefficients so that G(mZ) is a subgroup for every m.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .group import GroupError, GroupLaw

MAX_LEVEL = 30


class NonIntegralLaw(GroupError):
    pass


class NotGraded(GroupError):
    pass


def require_integral(law):
    for p in law.polys:
        for c in p.coefficients():
            if c.denominator != 1:
                raise NonIntegralLaw(
                    "dyadic arithmetic needs integer law coefficients; "
                    "convert to integral second-kind coordinates first"
                )


def digit_set(n, level):
    """A_level = {0, 2^(level-1)}^n as integer points."""
    if level < 1:
        raise GroupError("digit sets start at level 1")
    step = 2 ** (level - 1)
    return [tuple(map(Fraction, p)) for p in itertools.product((0, step), repeat=n)]


@dataclass(frozen=True)
class DyadicTile:
    base: tuple
    level: int

    def __post_init__(self):
        base = tuple(Fraction(c) for c in self.base)
        if self.level < 0 or self.level > MAX_LEVEL:
            raise GroupError(f"level must be in [0, {MAX_LEVEL}]")
        mod = 2 ** self.level
        for c in base:
            if c.denominator != 1 or int(c) % mod:
                raise GroupError(
                    f"tile base {base} not divisible by 2^{self.level}"
                )
        object.__setattr__(self, "base", base)

    def key(self):
        return (self.level, tuple(int(c) for c in self.base))


_T0_CACHE = {}


def _tile_at_zero(law, level):
    """Points of the level tile based at the identity (cached per law)."""
    key = (id(law), level)
    if key in _T0_CACHE:
        return _T0_CACHE[key]
    if level == 0:
        pts = [law.identity()]
    else:
        prev = _tile_at_zero(law, level - 1)
        pts = [
            law.multiply(a, t)
            for a in digit_set(law.n, level)
            for t in prev
        ]
        if len(set(pts)) != len(pts):
            raise GroupError(
                f"digit products collide at level {level}; factorization not unique"
            )
    _T0_CACHE[key] = pts
    return pts


def enumerate_dyadic(law, tile):
    """The exact 2^(n*level) points of the tile.

    Works for any law (pure product enumeration); the points are
    integer points exactly when the law is integral.
    """
    base = tile.base
    pts = [law.multiply(base, t) for t in _tile_at_zero(law, tile.level)]
    assert len(set(pts)) == 2 ** (law.n * tile.level)
    return pts


def dyadic_ancestor(law, h, level):
    """Factor h = g * a_level * ... * a_1 with a_i in A_i.

    Digits are peeled right to left: after removing a_1..a_i the
    remainder lies in G(2^i Z), which pins down each digit uniquely.
    A collision (zero or two admissible digits) raises, since the
    factorization's uniqueness is a checked assumption.
    """
    require_integral(law)
    h = tuple(Fraction(c) for c in h)
    if any(c.denominator != 1 for c in h):
        raise GroupError(f"{h} is not an integer point")
    digits = []
    cur = h
    for i in range(1, level + 1):
        mod = 2 ** i
        hit = None
        for a in digit_set(law.n, i):
            cand = law.multiply(cur, law.invert(a))
            if all(int(c) % mod == 0 for c in cand):
                if hit is not None:
                    raise GroupError(
                        f"digit factorization not unique for {h} at stage {i}"
                    )
                hit = (a, cand)
        if hit is None:
            raise GroupError(f"no admissible digit for {h} at stage {i}")
        digits.append(hit[0])
        cur = hit[1]
    return DyadicTile(cur, level), tuple(digits)


def in_dyadic_tile(law, h, tile):
    anc, _ = dyadic_ancestor(law, h, tile.level)
    return anc.base == tile.base


# ---------------------------------------------------------------------------
# Region description
# ---------------------------------------------------------------------------


@dataclass
class DyadicDescription:
    """Signed tile list whose evaluation reproduces a region exactly."""

    law: GroupLaw
    entries: list = field(default_factory=list)  # (sign, DyadicTile)

    def per_level_counts(self):
        counts = {}
        for _sign, tile in self.entries:
            counts[tile.level] = counts.get(tile.level, 0) + 1
        return counts

    def evaluate(self):
        out = set()
        for sign, tile in self.entries:
            pts = set(enumerate_dyadic(self.law, tile))
            if sign > 0:
                assert not (out & pts), "disjoint-union term overlaps"
                out |= pts
            else:
                assert pts <= out, "difference term not contained"
                out -= pts
        return out

    def to_text(self):
        lines = []
        for sign, tile in self.entries:
            mark = "+" if sign > 0 else "-"
            coords = " ".join(str(int(c)) for c in tile.base)
            lines.append(f"{mark} {tile.level} {coords}")
        return "\n".join(lines) + "\n"


def describe_region(law, region, max_level=MAX_LEVEL):
    """Full/empty/split decomposition over the dyadic ancestry tree.

    Works bottom up: level-(k-1) tiles that are fully inside the region
    are grouped under their level-k parents; a parent with all 2^n
    children full is itself full.  Emitted terms are the maximal full
    tiles (parent not full), so the result is a disjoint union (no
    difference terms are needed for exactness).
    """
    require_integral(law)
    # Plain-int coordinates: exact and much faster than Fraction here.
    pts = {tuple(int(c) for c in t) for t in region.tiles}
    if not pts:
        raise GroupError("cannot describe an empty region")
    n = law.n
    full = [pts]  # full[k] = bases of full level-k tiles
    parent = []  # parent[k][g] = level-(k+1) ancestor base of g in full[k]
    k = 0
    # Coordinates with an identically zero product polynomial satisfy
    # (g * a^-1)_i = g_i - a_i, so the digit there is forced by g mod 2^k;
    # only the remaining digits need a full product to decide.
    linear = [i for i in range(n) if law.polys[i].is_zero()]
    while len(full[k]) >= 2 ** n and k < max_level:
        k += 1
        mod = 2 ** k
        inv_digits = [
            (a, tuple(int(c) for c in law.invert(a)))
            for a in (
                tuple(map(int, d)) for d in digit_set(n, k)
            )
        ]
        par = {}
        children = {}
        for g in full[k - 1]:
            forced = tuple(g[i] % mod for i in linear)
            hit = None
            for a, ainv in inv_digits:
                if tuple(a[i] for i in linear) != forced:
                    continue
                cand = law.multiply(g, ainv)
                if all(int(c) % mod == 0 for c in cand):
                    if hit is not None:
                        raise GroupError(
                            f"digit factorization not unique at stage {k}"
                        )
                    hit = cand
            if hit is None:
                raise GroupError(f"no admissible digit at stage {k}")
            par[g] = hit
            children.setdefault(hit, 0)
            children[hit] += 1
        parent.append(par)
        full.append(
            {base for base, cnt in children.items() if cnt == 2 ** n}
        )

    desc = DyadicDescription(law)
    top = len(full) - 1
    for lvl in range(top, -1, -1):
        covered = full[lvl + 1] if lvl < top else set()
        for g in sorted(full[lvl]):
            if lvl == top or parent[lvl][g] not in covered:
                desc.entries.append((1, DyadicTile(g, lvl)))
    return desc


# ---------------------------------------------------------------------------
# Carnot dyadic tiles
# ---------------------------------------------------------------------------


def carnot_scales(law, level):
    return tuple(2 ** (level * w) for w in law.weights)


def carnot_dyadic(law, g, level):
    """Integer points of the level coset tile of delta_{2^level} G(Z).

    The subgroup delta_{2^level} G(Z) consists of integer points whose
    i-th coordinate is divisible by 2^(level*w_i); the tile at g is
    g * {r in Z^n : 0 <= r_i < 2^(level*w_i)}, with 2^(Q*level) points
    for homogeneous dimension Q = sum of the weights.
    """
    if not law.is_graded():
        raise NotGraded("Carnot dyadic tiles need a graded (dilation-automorphic) law")
    require_integral(law)
    scales = carnot_scales(law, level)
    g = tuple(Fraction(c) for c in g)
    for c, s in zip(g, scales):
        if c.denominator != 1 or int(c) % s:
            raise GroupError(f"base {g} not in the level-{level} subgroup")
    ranges = [range(s) for s in scales]
    pts = [
        law.multiply(g, tuple(map(Fraction, r)))
        for r in itertools.product(*ranges)
    ]
    assert len(set(pts)) == len(pts)
    return pts


def carnot_ancestor(law, h, level):
    """The subgroup element whose Carnot tile contains h (floor rounding)."""
    if not law.is_graded():
        raise NotGraded("Carnot dyadic tiles need a graded law")
    require_integral(law)
    scales = carnot_scales(law, level)
    h = tuple(Fraction(c) for c in h)
    g = []
    for i in range(law.n):
        partial = tuple(g) + (Fraction(0),) * (law.n - len(g))
        t = law.multiply(law.invert(partial), h)[i]
        s = scales[i]
        g.append(s * (t // s))
    return tuple(g)
