"""Exotic nets: group-metric separated, Euclidean-degenerate point sets.

The construction removes integer points inside growing Euclidean balls
centered far out along the line x2 = theta*x1 and compensates with one
added point per ball.  A shear certificate (few small-last-coordinate
points per dyadic tile at large x1) makes the removal invisible to
dyadic discrepancy counting.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .dyadic import DyadicTile, dyadic_ancestor, enumerate_dyadic
from .group import GroupError, project_law
from .tiling import Box, Window, lambda_net, Lambda, locate_tile


class ExoticError(GroupError):
    pass


class DegenerateForm(ExoticError):
    pass


class WindowTooSmall(UserWarning):
    pass


def one_center_matrix(law):
    """The bilinear coefficient matrix of the last coordinate's law.

    Requires all lower coordinates to be abelian and the top polynomial
    to be bilinear; entries a[k][l] are the coefficients of a_k * b_l.
    """
    n = law.n
    if n < 3:
        raise ExoticError("need dimension >= 3 for the construction")
    for p in law.polys[:-1]:
        if not p.is_zero():
            raise ExoticError("law is not step-2 with one-dimensional center")
    a = [[Fraction(0)] * (n - 1) for _ in range(n - 1)]
    top = law.polys[-1]
    if top.is_zero():
        raise DegenerateForm("abelian law has a zero shear form")
    for mono, c in top.terms.items():
        if len(mono) != 2 or any(e != 1 for _, e in mono):
            raise ExoticError("top polynomial is not bilinear")
        names = dict(mono)
        ks = [int(v[1:]) for v in names if v.startswith("a")]
        ls = [int(v[1:]) for v in names if v.startswith("b")]
        if len(ks) != 1 or len(ls) != 1:
            raise ExoticError("top polynomial is not bilinear")
        a[ks[0] - 1][ls[0] - 1] += c
    return a


def shear_form(law, theta):
    """(a_{1j} + theta*a_{2j})_{j<n}: the slab functional's coefficients."""
    a = one_center_matrix(law)
    theta = Fraction(theta)
    form = tuple(a[0][j] + theta * a[1][j] for j in range(len(a)))
    if all(c == 0 for c in form):
        raise DegenerateForm("shear form vanishes identically")
    return form


@dataclass
class ExoticSpec:
    law: object  # step-2 one-center law with antisymmetric coefficients
    integral_law: object  # same group in integral coordinates, for tiles
    theta: Fraction
    i_max: int = 2
    compressed_schedule: bool = False  # visualization-only smaller x_E
    _xtable: dict = field(default_factory=dict)
    _xe: dict = field(default_factory=dict)

    def __post_init__(self):
        self.theta = Fraction(self.theta)
        if not (0 < self.theta < 1):
            raise ExoticError("theta must lie in (0, 1)")
        a = one_center_matrix(self.law)
        n = self.law.n
        for k in range(n - 1):
            for l in range(n - 1):
                if a[k][l] != -a[l][k]:
                    raise ExoticError(
                        "shear coefficients must satisfy a_kl = -a_lk"
                    )
        if a[0][1] == 0:
            raise DegenerateForm(
                "a_12 = 0; permute coordinates so the first two do not commute"
            )
        self.a12 = a[0][1]
        self.form = shear_form(self.law, self.theta)

    # -- schedule ------------------------------------------------------

    @staticmethod
    def f(i):
        return i + 2 ** i

    def x_e(self, i):
        if i not in self._xe:
            if self.compressed_schedule:
                self._xe[i] = self.x_theta(i, i) * 4 ** i
            else:
                self._xe[i] = self.x_theta(i, i) + 2 ** (i * i)
        return self._xe[i]

    def ball_center(self, i):
        xe = self.x_e(i)
        return (Fraction(xe), self.theta * xe) + (Fraction(0),) * (self.law.n - 2)

    def added_point(self, i):
        """(i,0,..,0) * (0, -1/2/(a_12 i), 0,..,0, -1/2), exactly."""
        n = self.law.n
        left = (Fraction(i),) + (Fraction(0),) * (n - 1)
        right = (
            (Fraction(0), Fraction(-1, 2) / (self.a12 * i))
            + (Fraction(0),) * (n - 3)
            + (Fraction(-1, 2),)
        )
        return self.law.multiply(left, right)

    # -- shear table ---------------------------------------------------

    def slab_values(self, level):
        """Sorted distinct values of the shear form over the level tile."""
        n = self.law.n
        side = 2 ** level
        vals = set()
        import itertools

        for t in itertools.product(range(side), repeat=n - 1):
            vals.add(sum((c * v for c, v in zip(self.form, t)), Fraction(0)))
        return sorted(vals)

    def slab_gap(self, level):
        """Minimal nonzero gap between slab values; None at level 0."""
        vals = self.slab_values(level)
        if len(vals) < 2:
            return None
        gap = min(b - a for a, b in zip(vals, vals[1:]) if b > a)
        if gap == 0:
            raise DegenerateForm("slab values collide with zero gap")
        return gap

    def _vertical_extent(self, level):
        from .dyadic import _tile_at_zero

        pts = _tile_at_zero(self.integral_law, level)
        last = [p[-1] for p in pts]
        return max(last) - min(last)

    def certify(self, level, i, x):
        """Exhaustive check that the shear isolates a single slab.

        The level tile holding (x+1, ~theta(x+1), 0) may contain at
        most (2i+1) * 2^(level*(n-2)) integer points with |x_n| <= i:
        one slab's worth of columns, each clipped to the window width.
        """
        n = self.law.n
        x1 = Fraction(x) + 1
        x2 = Fraction(round(self.theta * x1))
        g = (x1, x2) + (Fraction(0),) * (n - 2)
        tile, _ = dyadic_ancestor(self.integral_law, g, level)
        count = sum(
            1
            for p in enumerate_dyadic(self.integral_law, tile)
            if abs(p[-1]) <= i
        )
        return count <= (2 * i + 1) * 2 ** (level * (n - 2))

    def x_theta(self, level, i):
        """Certified shear threshold, increasing in both arguments."""
        key = (level, i)
        if key in self._xtable:
            return self._xtable[key]
        if level == 0:
            x = Fraction(self.f(i))
        else:
            gap = self.slab_gap(level)
            vert = self._vertical_extent(level)
            spread = self.slab_values(level)[-1] - self.slab_values(level)[0]
            x = (2 * i + vert + self.f(i) * spread + 1) / gap
            x = Fraction(math.ceil(x))
        # monotone in each argument by running maxima
        prior = [
            self._xtable[k]
            for k in self._xtable
            if k[0] <= level and k[1] <= i
        ]
        if prior:
            x = max(x, max(prior))
        if level > 0:
            while not self.certify(level, i, x):
                x *= 2
        self._xtable[key] = x
        return x


# ---------------------------------------------------------------------------
# Net construction
# ---------------------------------------------------------------------------


def _euclidean_dist2(p, q):
    return sum((Fraction(a) - Fraction(b)) ** 2 for a, b in zip(p, q))


@dataclass
class ExoticNet:
    spec: ExoticSpec
    window: Window
    retained: list
    added: list
    removed: list

    def points(self, window=None):
        window = self.window if window is None else Window.of(window)
        return sorted(
            p for p in self.retained + self.added if window.contains(p)
        )

    def contains(self, p):
        p = tuple(Fraction(c) for c in p)
        if p in set(self.added):
            return True
        if any(Fraction(c).denominator != 1 for c in p):
            return False
        return p not in set(self.removed)

    def describe(self):
        return f"exotic(theta={self.spec.theta}, i_max={self.spec.i_max})"


def build_exotic(spec, window):
    """G(Z) minus the Euclidean balls E_i, plus one added point per i."""
    window = Window.of(window)
    lattice = lambda_net(spec.law, Lambda((1,) * spec.law.n), window)
    centers = {i: spec.ball_center(i) for i in range(1, spec.i_max + 1)}
    touched = [
        i
        for i, c in centers.items()
        if any(
            _ball_box(c, i, b) for b in window.boxes
        )
    ]
    if not touched:
        warnings.warn(
            "window misses every removal ball; net equals G(Z) here",
            WindowTooSmall,
        )
    removed = []
    retained = []
    for p in lattice:
        if any(
            _euclidean_dist2(p, centers[i]) <= i * i
            for i in range(1, spec.i_max + 1)
        ):
            removed.append(p)
        else:
            retained.append(p)
    added = []
    retained_set = set(retained)
    for i in range(1, spec.i_max + 1):
        axis = (Fraction(i),) + (Fraction(0),) * (spec.law.n - 1)
        q = spec.added_point(i)
        # an added point that is already a lattice point stays a single point
        if window.contains(q) and window.contains(axis) and q not in retained_set:
            added.append(q)
    return ExoticNet(
        spec=spec, window=window, retained=retained, added=added, removed=removed
    )


def _ball_box(center, radius, box):
    return all(
        lo - radius <= c <= hi + radius
        for c, (lo, hi) in zip(center, box.bounds)
    )


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def verify_exotic(net, levels=range(6), epsilon=0.1, bd_window=None, sep_window=None):
    """Report the four exotic-net properties at desk scale.

    (a) Euclidean hole radius inside each covered ball; (b) Euclidean
    gaps between added points and their nearest neighbors (shrinking in
    i); (c) quasi-norm separation; (d) dyadic discrepancy slope versus
    the intact lattice.
    """
    from .criteria import LambdaNetHandle, strong_bd_check
    from .tiling import separation_constants

    spec = net.spec
    pts = net.points()
    report = {}

    holes = {}
    for i in range(1, spec.i_max + 1):
        c = spec.ball_center(i)
        if not net.window.contains(c):
            continue
        d2 = min((_euclidean_dist2(p, c) for p in pts), default=None)
        holes[i] = math.sqrt(float(d2)) if d2 is not None else float("inf")
    report["hole_radii"] = holes

    gaps = {}
    for i in range(1, spec.i_max + 1):
        q = spec.added_point(i)
        if not net.window.contains(q):
            continue
        others = [p for p in pts if p != q]
        d2 = min((_euclidean_dist2(p, q) for p in others), default=None)
        gaps[i] = math.sqrt(float(d2)) if d2 is not None else float("inf")
    report["added_gaps"] = gaps
    vals = [gaps[i] for i in sorted(gaps)]
    report["added_gaps_decreasing"] = all(
        b < a for a, b in zip(vals, vals[1:])
    )

    sep_window = net.window if sep_window is None else Window.of(sep_window)
    sep_pts = [p for p in pts if sep_window.contains(p)]
    if len(sep_pts) >= 2:
        c_est, _ = separation_constants(
            spec.integral_law, sep_pts, sep_window, grid_pitch=None
        )
        report["c_est"] = c_est

    bd_window = net.window if bd_window is None else Window.of(bd_window)
    base = LambdaNetHandle(spec.integral_law, (1,) * spec.law.n)
    bd = strong_bd_check(
        spec.integral_law, base, net, levels, bd_window, epsilon=epsilon
    )
    report["bd_slope"] = bd.slope
    report["bd_d_values"] = bd.d_values
    report["bd_target"] = spec.law.n - 2
    report["bd_ok"] = bd.slope <= spec.law.n - 2 + 0.15
    return report
