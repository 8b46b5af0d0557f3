"""Coarse perimeter, discrepancy counting, spread/BD criteria, product nets.

Nets are handles exposing deterministic point enumeration over a window
plus exact membership; test sets are boxes, tile regions, or dyadic
tiles.  Verdicts about boundedness are growth-trend fits at finite
scale and the reports say so.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .dyadic import DyadicTile, dyadic_ancestor, enumerate_dyadic, _tile_at_zero
from .group import GroupError, quasi_norm
from .tiling import (
    Box,
    FaceWeights,
    Lambda,
    Region,
    Window,
    combinatorial_perimeter,
    face_neighbors,
    lambda_net,
    locate_tile,
)


class CriteriaError(GroupError):
    pass


class MethodUnsupported(CriteriaError):
    pass


class WindowExceeded(CriteriaError):
    pass


class ProjectionMismatch(CriteriaError):
    pass


# ---------------------------------------------------------------------------
# Net handles
# ---------------------------------------------------------------------------


class LambdaNetHandle:
    """The net G(Lambda): points with i-th coordinate in lambda_i Z."""

    def __init__(self, law, lam):
        self.law = law
        self.lam = lam if isinstance(lam, Lambda) else Lambda(lam)

    def points(self, window):
        return lambda_net(self.law, self.lam, window)

    def contains(self, p):
        return all(
            (Fraction(c) / e).denominator == 1
            for c, e in zip(p, self.lam.entries)
        )

    def describe(self):
        return f"G({'x'.join(str(e) for e in self.lam.entries)})"


class ExplicitNet:
    """A finite point list with an optional declared coverage window."""

    def __init__(self, points, window=None, label="explicit"):
        self._points = sorted(tuple(Fraction(c) for c in p) for p in points)
        self._set = set(self._points)
        self.window = Window.of(window) if window is not None else None
        self.label = label

    def points(self, window):
        window = Window.of(window)
        if self.window is not None:
            for box in window.boxes:
                if not any(
                    all(
                        dlo <= lo and hi <= dhi
                        for (lo, hi), (dlo, dhi) in zip(box.bounds, dec.bounds)
                    )
                    for dec in self.window.boxes
                ):
                    raise WindowExceeded(
                        "requested window exceeds the net's declared coverage"
                    )
        return [p for p in self._points if window.contains(p)]

    def contains(self, p):
        return tuple(Fraction(c) for c in p) in self._set

    def describe(self):
        return self.label


class TranslatedNet:
    """A net left-translated by a fixed group element."""

    def __init__(self, law, base, g0):
        self.law = law
        self.base = base
        self.g0 = tuple(Fraction(c) for c in g0)

    def points(self, window):
        window = Window.of(window)
        pad = max(abs(c) for c in self.g0) + 1
        big = Window(
            tuple(
                Box(
                    tuple((lo - pad, hi + pad) for lo, hi in b.bounds),
                    closed_hi=b.closed_hi,
                )
                for b in window.boxes
            )
        )
        out = [
            self.law.multiply(self.g0, p)
            for p in self.base.points(big)
        ]
        return sorted(p for p in out if window.contains(p))

    def contains(self, p):
        return self.base.contains(
            self.law.multiply(self.law.invert(self.g0), p)
        )

    def describe(self):
        return f"{self.base.describe()} shifted by {tuple(map(str, self.g0))}"


class ProductNet:
    """Y' x lambda*Z over a projection system G -> G'."""

    def __init__(self, law, base, lam):
        self.law = law
        self.base = base
        self.lam = Fraction(lam)
        if self.lam <= 0:
            raise CriteriaError("product-net spacing must be positive")

    def points(self, window):
        window = Window.of(window)
        if window.dimension != self.law.n:
            raise ProjectionMismatch("window dimension does not match the group")
        out = []
        seen = set()
        for box in window.boxes:
            pbox = Box(box.bounds[:-1], closed_hi=box.closed_hi)
            try:
                base_pts = self.base.points(Window.of(pbox))
            except TypeError as exc:
                raise ProjectionMismatch(
                    "base net does not live on the projected group"
                ) from exc
            for p in base_pts:
                if len(p) != self.law.n - 1:
                    raise ProjectionMismatch(
                        "base net points have the wrong dimension"
                    )
            kmin, kmax = box.multiplier_range(self.law.n - 1, self.lam)
            for p in base_pts:
                for k in range(kmin, kmax + 1):
                    q = p + (k * self.lam,)
                    if q not in seen:
                        seen.add(q)
                        out.append(q)
        return sorted(out)

    def contains(self, p):
        t = Fraction(p[-1])
        return (t / self.lam).denominator == 1 and self.base.contains(p[:-1])

    def describe(self):
        return f"{self.base.describe()} x {self.lam}Z"


def as_net(obj):
    if hasattr(obj, "points") and hasattr(obj, "contains"):
        return obj
    return ExplicitNet(obj)


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------


def count_in(law, net, test_set):
    """Exact #(Y intersect A) for a box/window/region/dyadic-tile A."""
    net = as_net(net)
    if isinstance(test_set, DyadicTile):
        return sum(
            1 for p in enumerate_dyadic(law, test_set) if net.contains(p)
        )
    if isinstance(test_set, Region):
        return sum(1 for p in test_set.tiles if net.contains(p))
    window = Window.of(test_set)
    return len(net.points(window))


def discrepancy(law, net1, net2, test_set):
    return abs(count_in(law, net1, test_set) - count_in(law, net2, test_set))


def test_set_volume(law, test_set):
    if isinstance(test_set, DyadicTile):
        return Fraction(2) ** (law.n * test_set.level)
    if isinstance(test_set, Region):
        return Fraction(len(test_set.tiles))
    window = Window.of(test_set)
    return sum(b.volume() for b in window.boxes)


_FW_CACHE = {}
_TILE_PERIM_CACHE = {}


def cached_face_weights(law):
    key = id(law)
    if key not in _FW_CACHE:
        _FW_CACHE[key] = face_neighbors(law)
    return _FW_CACHE[key]


def dyadic_tile_perimeter(law, level):
    """Combinatorial perimeter of a level tile (base-independent)."""
    key = (id(law), level)
    if key not in _TILE_PERIM_CACHE:
        fw = cached_face_weights(law)
        region = Region(frozenset(_tile_at_zero(law, level)), law)
        _TILE_PERIM_CACHE[key] = combinatorial_perimeter(region, fw)
    return _TILE_PERIM_CACHE[key]


def test_set_perimeter(law, test_set):
    if isinstance(test_set, DyadicTile):
        return dyadic_tile_perimeter(law, test_set.level)
    if isinstance(test_set, Region):
        return combinatorial_perimeter(test_set, cached_face_weights(law))
    raise MethodUnsupported(
        "combinatorial perimeter needs a tile region or dyadic tile"
    )


# ---------------------------------------------------------------------------
# Coarse perimeter
# ---------------------------------------------------------------------------


def _region_indicator(law, region):
    unit = Lambda((1,) * law.n)

    def ind(x):
        return locate_tile(law, x, unit) in region.tiles

    return ind


def _region_bounds(region, pad):
    pts = list(region.tiles)
    n = len(pts[0])
    return Box(
        tuple(
            (
                min(p[i] for p in pts) - Fraction(1, 2) - pad,
                max(p[i] for p in pts) + Fraction(1, 2) + pad,
            )
            for i in range(n)
        )
    )


def _near_boundary_exact_abelian(law, region, x, r):
    # In an abelian group the quasi-norm r-ball at x is the box
    # [x_i - r^w_i, x_i + r^w_i]; x is within r of the region boundary
    # iff that box meets both the region and its complement.
    n = law.n
    r = Fraction(r)
    lo = [x[i] - r ** law.weights[i] for i in range(n)]
    hi = [x[i] + r ** law.weights[i] for i in range(n)]
    import itertools as it

    cells = it.product(
        *[
            range(
                int(math.floor(float(lo[i]) + 0.5 - 1)) - 1,
                int(math.floor(float(hi[i]) + 0.5)) + 2,
            )
            for i in range(n)
        ]
    )
    hit_in = hit_out = False
    for cell in cells:
        cell_f = tuple(map(Fraction, cell))
        # does the unit cell at cell meet the ball box?
        if any(
            cell_f[i] + Fraction(1, 2) <= lo[i] or cell_f[i] - Fraction(1, 2) > hi[i]
            for i in range(n)
        ):
            continue
        if cell_f in region.tiles:
            hit_in = True
        else:
            hit_out = True
        if hit_in and hit_out:
            return True
    return False


def _near_boundary_probe(law, ind, x, r, rng, probes=48):
    hit_in = hit_out = False
    for _ in range(probes):
        u = tuple(
            Fraction(rng.randint(-1000, 1000), 1000) ** 1 for _ in range(law.n)
        )
        y = tuple(
            x[i] + u[i] * Fraction(r) ** law.weights[i] for i in range(law.n)
        )
        if ind(y):
            hit_in = True
        else:
            hit_out = True
        if hit_in and hit_out:
            return True
    return False


def coarse_perimeter(law, region, r, method="combinatorial", samples=4000, seed=0):
    """Perimeter of a tile region by one of three estimators.

    combinatorial: exact weighted face count (tile regions only).
    neighborhood: Monte Carlo volume of the quasi-norm r-neighborhood
    of the region boundary; exact ball/region intersection tests in the
    abelian case, probe sampling otherwise.  Returns a report dict.
    boundary_net: greedy maximal r-separated subset of sampled
    near-boundary points; the count is the estimate.
    """
    if method == "combinatorial":
        if not isinstance(region, (Region, DyadicTile)):
            raise MethodUnsupported(
                "combinatorial perimeter is defined for tile regions only"
            )
        return test_set_perimeter(law, region)

    if isinstance(region, DyadicTile):
        region = Region(frozenset(enumerate_dyadic(law, region)), law)
    if not isinstance(region, Region):
        raise MethodUnsupported("perimeter estimators need a tile region")
    r = Fraction(r)
    if r <= 0:
        raise CriteriaError("r must be positive")
    rng = random.Random(seed)
    ind = _region_indicator(law, region)
    abelian = all(p.is_zero() for p in law.polys)
    pad = max(r ** w for w in law.weights)
    box = _region_bounds(region, pad)
    vol = box.volume()

    def near(x):
        if abelian:
            return _near_boundary_exact_abelian(law, region, x, r)
        return _near_boundary_probe(law, ind, x, r, rng)

    if method == "neighborhood":
        hits = 0
        for _ in range(samples):
            x = tuple(
                lo + Fraction(rng.randint(0, 10 ** 6), 10 ** 6) * (hi - lo)
                for lo, hi in box.bounds
            )
            if near(x):
                hits += 1
        frac = hits / samples
        est = float(vol) * frac
        stderr = float(vol) * math.sqrt(max(frac * (1 - frac), 1e-12) / samples)
        return {"estimate": est, "stderr": stderr, "samples": samples}

    if method == "boundary_net":
        # Collect near-boundary witnesses, then greedily thin to an
        # r-separated set; its size estimates the boundary-net count.
        witnesses = []
        for _ in range(samples):
            x = tuple(
                lo + Fraction(rng.randint(0, 10 ** 6), 10 ** 6) * (hi - lo)
                for lo, hi in box.bounds
            )
            if near(x):
                witnesses.append(x)
        kept = []
        for x in witnesses:
            ok = True
            for y in kept:
                d = quasi_norm(law, law.multiply(law.invert(y), x))
                if d < float(r):
                    ok = False
                    break
            if ok:
                kept.append(x)
        return {"count": len(kept), "samples": samples}

    raise MethodUnsupported(f"unknown perimeter method {method!r}")


# ---------------------------------------------------------------------------
# Uniform spread
# ---------------------------------------------------------------------------


@dataclass
class SpreadRecord:
    descriptor: str
    count: int
    volume: Fraction
    perimeter: Fraction
    ratio: float


@dataclass
class SpreadReport:
    density: Fraction
    records: list = field(default_factory=list)
    scale_max: dict = field(default_factory=dict)

    @property
    def max_ratio(self):
        return max((r.ratio for r in self.records), default=0.0)

    def verdict_bounded(self, slack=0.05):
        """True when the per-scale max ratio does not grow across scales."""
        keys = sorted(self.scale_max)
        if len(keys) < 2:
            return True
        vals = [self.scale_max[k] for k in keys]
        return all(b <= a * (1 + slack) + 1e-12 for a, b in zip(vals, vals[1:]))

    def to_records(self):
        lines = []
        for r in self.records:
            lines.append(
                f"{r.descriptor}\t{r.count}\t{r.volume}\t{r.perimeter}\t{r.ratio:.6g}"
            )
        return "\n".join(lines) + "\n"


def uniformly_spread_check(law, net, v, families):
    """Max of |#(Y cap A) - ||A||/v| / p(A) across labelled families.

    families: list of (scale_label, [test_sets]); per-scale maxima feed
    the bounded/unbounded trend verdict.  Test sets must be tile
    regions or dyadic tiles so the perimeter is exact.
    """
    v = Fraction(v)
    if v <= 0:
        raise CriteriaError("density must be positive")
    net = as_net(net)
    report = SpreadReport(density=v)
    for label, sets in families:
        worst = 0.0
        for a in sets:
            cnt = count_in(law, net, a)
            vol = test_set_volume(law, a)
            per = test_set_perimeter(law, a)
            ratio = float(abs(cnt - vol / v)) / float(per)
            desc = (
                f"tile l={a.level} base={tuple(int(c) for c in a.base)}"
                if isinstance(a, DyadicTile)
                else f"region #{len(a.tiles)}"
            )
            report.records.append(SpreadRecord(f"{label}:{desc}", cnt, vol, per, ratio))
            worst = max(worst, ratio)
        report.scale_max[label] = worst
    return report


# ---------------------------------------------------------------------------
# Strong BD check
# ---------------------------------------------------------------------------


@dataclass
class StrongBDReport:
    levels: list
    d_values: dict
    slope: float
    threshold: float
    verdict: bool

    def to_records(self):
        lines = [f"level\tD"]
        for k in self.levels:
            lines.append(f"{k}\t{self.d_values[k]}")
        lines.append(f"slope\t{self.slope:.6g}")
        lines.append(f"threshold\t{self.threshold:.6g}")
        lines.append(f"verdict\t{'pass' if self.verdict else 'fail'}")
        return "\n".join(lines) + "\n"


def fit_slope(pairs):
    """Least-squares slope of y on x."""
    if len(pairs) < 2:
        return float("-inf")
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    den = sum((x - mx) ** 2 for x in xs)
    if den == 0:
        return float("-inf")
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / den


def strong_bd_check(law, net1, net2, levels, window, epsilon=0.1):
    """Per-level max dyadic-tile discrepancy and its growth slope.

    Only tiles containing points of the symmetric difference can have
    nonzero discrepancy, so D(k) is a max over ancestors of those
    points rather than over all tiles.  Verdict: fitted slope of
    log2 D(k) is at most n - 1 - epsilon.
    """
    net1, net2 = as_net(net1), as_net(net2)
    window = Window.of(window)
    pts1 = set(net1.points(window))
    pts2 = set(net2.points(window))
    removed = pts1 - pts2
    added = pts2 - pts1
    diffs = [(p, 1) for p in removed] + [(p, -1) for p in added]
    unit = Lambda((1,) * law.n)

    def ancestor_key(p, k):
        # Non-integer points count through the unit tile containing them.
        if any(Fraction(c).denominator != 1 for c in p):
            p = locate_tile(law, p, unit)
        anc, _ = dyadic_ancestor(law, p, k)
        return anc.key()

    d_values = {}
    for k in levels:
        per_tile = {}
        for p, sgn in diffs:
            key = ancestor_key(p, k)
            per_tile[key] = per_tile.get(key, 0) + sgn
        d_values[k] = max((abs(v) for v in per_tile.values()), default=0)
    pairs = [(k, math.log2(d_values[k])) for k in levels if d_values[k] > 0]
    slope = fit_slope(pairs)
    threshold = law.n - 1 - epsilon
    return StrongBDReport(
        levels=list(levels),
        d_values=d_values,
        slope=slope,
        threshold=threshold,
        verdict=slope <= threshold,
    )


# ---------------------------------------------------------------------------
# Metric boundary
# ---------------------------------------------------------------------------


def _within(law, g, h, r):
    """Exact test quasi-norm distance(g, h) <= r for rational r."""
    d = law.multiply(law.invert(tuple(map(Fraction, g))), tuple(map(Fraction, h)))
    r = Fraction(r)
    return all(abs(c) <= r ** w for c, w in zip(d, law.weights))


def metric_boundary(law, y_points, a_points, r, kind="collar"):
    """Outer/inner/collar metric r-boundary of A inside Y (quasi-norm)."""
    r = Fraction(r)
    if r <= 0:
        raise CriteriaError("r must be positive")
    y_points = [tuple(Fraction(c) for c in p) for p in y_points]
    a_set = {tuple(Fraction(c) for c in p) for p in a_points}
    complement = [p for p in y_points if p not in a_set]
    outer = [
        p
        for p in complement
        if any(_within(law, a, p, r) for a in a_set)
    ]
    inner = [
        a
        for a in sorted(a_set)
        if any(_within(law, a, p, r) for p in complement)
    ]
    if kind == "outer":
        return sorted(outer)
    if kind == "inner":
        return sorted(inner)
    if kind == "collar":
        return sorted(set(outer) | set(inner))
    raise CriteriaError(f"unknown boundary kind {kind!r}")
