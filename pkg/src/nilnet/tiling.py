"""Lambda-nets, box tilings, face adjacency, combinatorial perimeter.

The Λ-box is the half-open coordinate box Π [−λ_i/2, λ_i/2); its
left-translates by the Λ-net tile the group, and locate_tile finds the
unique translate containing a point by successive rounding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .group import (
    DimensionMismatch,
    GroupError,
    GroupLaw,
    project_law,
    quasi_norm,
)


class TilingError(GroupError):
    pass


class EmptyWindow(TilingError):
    pass


class TooFewPoints(TilingError):
    pass


class DegenerateFace(TilingError):
    pass


# ---------------------------------------------------------------------------
# Windows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Axis-parallel box with inclusive lower and configurable upper bounds.

    bounds: tuple of (lo, hi) Fractions; closed_hi selects [lo, hi]
    versus [lo, hi) on every axis.
    """

    bounds: tuple
    closed_hi: bool = True

    def __post_init__(self):
        object.__setattr__(
            self,
            "bounds",
            tuple((Fraction(lo), Fraction(hi)) for lo, hi in self.bounds),
        )
        for lo, hi in self.bounds:
            if hi < lo or (hi == lo and not self.closed_hi):
                raise EmptyWindow(f"empty box axis [{lo}, {hi}]")

    @classmethod
    def cube(cls, radius, n, closed_hi=True):
        r = Fraction(radius)
        return cls(tuple((-r, r) for _ in range(n)), closed_hi=closed_hi)

    @property
    def dimension(self):
        return len(self.bounds)

    def contains(self, point):
        if len(point) != len(self.bounds):
            raise DimensionMismatch("point/box dimension mismatch")
        for c, (lo, hi) in zip(point, self.bounds):
            c = Fraction(c)
            if c < lo or c > hi or (c == hi and not self.closed_hi):
                return False
        return True

    def multiplier_range(self, axis, lam):
        """Integers k with k*lam inside this box on the given axis."""
        lo, hi = self.bounds[axis]
        lam = Fraction(lam)
        kmin = -((-lo) // lam)  # ceil(lo/lam)
        kmax = hi // lam  # floor(hi/lam)
        if not self.closed_hi and kmax * lam == hi:
            kmax -= 1
        return int(kmin), int(kmax)

    def volume(self):
        v = Fraction(1)
        for lo, hi in self.bounds:
            v *= hi - lo
        return v

    def grid(self, pitch):
        """Lattice of pitch-spaced points covering the box (inclusive)."""
        pitch = Fraction(pitch)
        axes = []
        for lo, hi in self.bounds:
            vals = []
            k = -((-lo) // pitch)
            while k * pitch <= hi:
                vals.append(k * pitch)
                k += 1
            axes.append(vals or [lo])
        return [tuple(p) for p in itertools.product(*axes)]


@dataclass(frozen=True)
class Window:
    """A finite union of boxes; membership is the union test."""

    boxes: tuple

    def __post_init__(self):
        boxes = tuple(
            b if isinstance(b, Box) else Box(b) for b in self.boxes
        )
        if not boxes:
            raise EmptyWindow("window has no boxes")
        dims = {b.dimension for b in boxes}
        if len(dims) != 1:
            raise DimensionMismatch("window boxes have mixed dimensions")
        object.__setattr__(self, "boxes", boxes)

    @classmethod
    def of(cls, box_or_window):
        if isinstance(box_or_window, Window):
            return box_or_window
        return cls((box_or_window,))

    @property
    def dimension(self):
        return self.boxes[0].dimension

    def contains(self, point):
        return any(b.contains(point) for b in self.boxes)

    def grid(self, pitch):
        seen = set()
        out = []
        for b in self.boxes:
            for p in b.grid(pitch):
                if p not in seen:
                    seen.add(p)
                    out.append(p)
        return out


# ---------------------------------------------------------------------------
# Lambda nets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lambda:
    entries: tuple

    def __post_init__(self):
        entries = tuple(Fraction(e) for e in self.entries)
        if any(e <= 0 for e in entries):
            raise TilingError("Lambda entries must be positive")
        object.__setattr__(self, "entries", entries)

    @property
    def covolume(self):
        v = Fraction(1)
        for e in self.entries:
            v *= e
        return v

    def box(self):
        return Box(
            tuple((-e / 2, e / 2) for e in self.entries), closed_hi=False
        )


def lambda_net(law, lam, window):
    """All points with i-th coordinate in λ_iℤ inside the window, lex order."""
    lam = lam if isinstance(lam, Lambda) else Lambda(lam)
    window = Window.of(window)
    if window.dimension != law.n or len(lam.entries) != law.n:
        raise DimensionMismatch("window/Lambda dimension mismatch")
    seen = set()
    out = []
    for box in window.boxes:
        ranges = [
            range(*_inclusive(box.multiplier_range(i, lam.entries[i])))
            for i in range(law.n)
        ]
        for ks in itertools.product(*ranges):
            p = tuple(k * e for k, e in zip(ks, lam.entries))
            if p not in seen:
                seen.add(p)
                out.append(p)
    out.sort()
    return out


def _inclusive(pair):
    kmin, kmax = pair
    return kmin, kmax + 1


def locate_tile(law, x, lam):
    """The unique net point g with g^{-1}*x in the Λ-box.

    Successive rounding: coordinate i of g^{-1}*x has the form
    −g_i + (an expression not involving g_i), so each g_i is fixed by
    rounding that expression to the nearest multiple of λ_i
    (ties toward the half-open side).
    """
    lam = lam if isinstance(lam, Lambda) else Lambda(lam)
    if len(x) != law.n:
        raise DimensionMismatch(f"expected {law.n} coordinates")
    x = tuple(Fraction(c) for c in x)
    g = []
    for i in range(law.n):
        partial = tuple(g) + (Fraction(0),) * (law.n - len(g))
        t = law.multiply(law.invert(partial), x)[i]
        li = lam.entries[i]
        g.append(li * ((t / li + Fraction(1, 2)) // 1))
    return tuple(g)


def tile_residual(law, x, lam):
    g = locate_tile(law, x, lam)
    r = law.multiply(law.invert(g), tuple(Fraction(c) for c in x))
    return g, r


# ---------------------------------------------------------------------------
# Faces of the unit tiling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FaceWeights:
    """Neighbors of the unit tile with positive rational face weights."""

    weights: dict

    @property
    def neighbors(self):
        return set(self.weights)

    def weight(self, h):
        return self.weights.get(h, Fraction(0))

    def total(self):
        return sum(self.weights.values(), Fraction(0))


_FACET_GRID = (Fraction(-3, 8), Fraction(0), Fraction(3, 8))
_EPS = Fraction(1, 1000)


def face_neighbors(law, grid=_FACET_GRID, eps=_EPS):
    """Neighbors of the unit tile I_G with projection-consistent weights.

    Crossing construction: sample each boundary facet of the unit cube,
    push by eps along the outward normal, and locate the containing
    tile.  Horizontal faces (last-coordinate facets) get weight 1; each
    projected face's weight is split equally among its vertical lifts.
    """
    n = law.n
    unit = Lambda((1,) * n)
    if n == 1:
        return FaceWeights({(Fraction(1),): Fraction(1), (Fraction(-1),): Fraction(1)})

    horizontal = {}
    for sign in (1, -1):
        h = tuple(Fraction(0) for _ in range(n - 1)) + (Fraction(sign),)
        horizontal[h] = Fraction(1)

    proj_fw = face_neighbors(project_law(law), grid=grid, eps=eps)

    vertical = set()
    for axis in range(n - 1):
        for sign in (1, -1):
            found = set()
            for free in itertools.product(grid, repeat=n - 1):
                x = list(free[:axis]) + [sign * (Fraction(1, 2) + eps)] + list(
                    free[axis:]
                )
                g = locate_tile(law, tuple(x), unit)
                if all(c == 0 for c in g):
                    raise DegenerateFace(
                        f"facet axis {axis + 1} sign {sign} located the tile itself"
                    )
                found.add(g)
            vertical |= found

    # Group vertical neighbors by their projection and split weights.
    groups = {}
    for g in vertical:
        groups.setdefault(g[:-1], []).append(g)
    weights = dict(horizontal)
    for pg, lifts in groups.items():
        w = proj_fw.weight(pg)
        if w == 0:
            raise DegenerateFace(
                f"vertical neighbor projects to non-face {pg} of the quotient"
            )
        share = w / len(lifts)
        for g in lifts:
            weights[g] = share

    # Inversion closure: a face seen from one side must be seen from the
    # other with the same weight.
    for g in list(weights):
        ginv = law.invert(g)
        if ginv not in weights:
            weights[ginv] = weights[g]
        elif weights[ginv] != weights[g]:
            raise DegenerateFace(
                f"asymmetric weights for {g} and its inverse"
            )
    return FaceWeights(weights)


# ---------------------------------------------------------------------------
# Regions and perimeter
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """A finite union of unit tiles named by their integer base points."""

    tiles: frozenset
    law: GroupLaw

    def __post_init__(self):
        tiles = frozenset(tuple(Fraction(c) for c in t) for t in self.tiles)
        for t in tiles:
            if any(c.denominator != 1 for c in t):
                raise TilingError(f"region tile {t} is not an integer point")
        object.__setattr__(self, "tiles", tiles)

    @classmethod
    def from_box(cls, law, box):
        pts = lambda_net(law, Lambda((1,) * law.n), Window.of(box))
        return cls(frozenset(pts), law)

    def __len__(self):
        return len(self.tiles)

    def __contains__(self, t):
        return tuple(Fraction(c) for c in t) in self.tiles

    def union(self, other):
        return Region(self.tiles | other.tiles, self.law)

    def difference(self, other):
        return Region(self.tiles - other.tiles, self.law)


def combinatorial_perimeter(region, fw):
    """Total weight of faces between region tiles and outside tiles."""
    total = Fraction(0)
    law = region.law
    # Region tiles are integer by invariant; plain-int coordinates make
    # the product and membership tests much faster and stay exact.
    tiles = {tuple(int(c) for c in t) for t in region.tiles}
    faces = [
        (tuple(int(c) if Fraction(c).denominator == 1 else c for c in h), w)
        for h, w in fw.weights.items()
    ]
    for g in tiles:
        for h, w in faces:
            if law.multiply(g, h) not in tiles:
                total += w
    return total


# ---------------------------------------------------------------------------
# Separation constants
# ---------------------------------------------------------------------------


def group_distance(law, g, h):
    """Quasi-norm of the displacement g^{-1}*h."""
    return quasi_norm(law, law.multiply(law.invert(g), h))


def separation_constants(law, points, window, grid_pitch=Fraction(1, 4)):
    """(c_est, C_est) for the quasi-norm metric.

    c_est is half the minimal pairwise distance among the points;
    C_est is the largest distance from a pitch-grid sample of the
    window to its nearest point.  Both are float estimates for the
    quasi-norm metric, not the Riemannian one.
    """
    points = [tuple(Fraction(c) for c in p) for p in points]
    if len(points) < 2:
        raise TooFewPoints("separation constants need at least two points")
    window = Window.of(window)

    # Step-2 pruning: when all p_i vanish below the top coordinate, the
    # first n-1 displacement coordinates are plain differences, so their
    # max is a lower bound for the distance.
    flat_below = all(p.is_zero() for p in law.polys[:-1])
    best = None
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if flat_below and best is not None:
                lower = max(
                    abs(float(a - b)) ** (1.0 / w)
                    for a, b, w in zip(
                        points[i][:-1], points[j][:-1], law.weights[:-1]
                    )
                ) if law.n > 1 else 0.0
                if lower >= best:
                    continue
            d = group_distance(law, points[i], points[j])
            if best is None or d < best:
                best = d
    c_est = best / 2.0

    if grid_pitch is None:
        return c_est, None
    worst = 0.0
    for x in window.grid(grid_pitch):
        d = min(group_distance(law, p, x) for p in points)
        if d > worst:
            worst = d
    return c_est, worst
